#pragma once

#include "helixlab/engine.hpp"

#include <string>
#include <vector>

namespace helixlab {

struct UnknownBuiltin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named single-map families shipped with the tool.
//   sine-drift : 0.4*sinpi(x) + x + b   (parameter b)
//   identity   : x
MapSpec builtin_map(const std::string& name);
std::vector<std::string> builtin_map_names();

// Named L-iteration families: an L-system plus one map per letter.
//   lfam-gamma-cos : A -> A B, B -> B A;  A = gamma(x + 1), B = cos(x)
//   lfam-gamma-sin : same system;         A = isint(x) ? gamma(x + 0.5)
//                                             : gamma(x),  B = sinpi(x)
struct BuiltinLFamily {
    LSystemSpec system;
    LBindings bindings;
};
BuiltinLFamily builtin_lfamily(const std::string& name);
std::vector<std::string> builtin_lfamily_names();

}  // namespace helixlab
