#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "liftcheck/chainring.hpp"

namespace liftcheck {

using Json = nlohmann::json;  // std::map objects, so keys serialize sorted

// Integer coefficients of a polynomial in U (or X), lowest degree first,
// e.g. "U^2-3", "(U^2-3)(U-3)+729", "3U + 1". Throws ConfigError.
std::vector<std::int64_t> parse_int_poly(const std::string& s);

// "Z/9", "F9", "F3[U]/U^2", "Z3[U]/(U^2-3, U^4)". Throws ConfigError.
ChainRing parse_ring(const std::string& s);

std::vector<std::string> verify_ids();

// Runs a named verification; the report carries "id" and "pass". Missing
// parameters take documented defaults. Throws ConfigError for an unknown id.
Json verify(const std::string& id, const Json& params = Json::object());

// Exit codes: 0 all checks pass, 1 a verification failed, 2 configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liftcheck
