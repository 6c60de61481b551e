#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "plcore/formula.hpp"

namespace plcore {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses either a positive formula or an h-universal sentence
// ("forall vars. ~(...)" is the only permitted use of ~).
std::variant<PosFormula, HuSentence> parse_formula(SigPtr sig, const std::string& text);

PosFormula parse_positive(SigPtr sig, const std::string& text);
HuSentence parse_hu(SigPtr sig, const std::string& text);

}  // namespace plcore
