#include "helixlab/builtin.hpp"

namespace helixlab {

namespace {

const char* kLWordRules = "alphabet A B; axiom A; A -> A B; B -> B A";

}  // namespace

MapSpec builtin_map(const std::string& name) {
    if (name == "sine-drift") {
        return parse_map("0.4 * sinpi(x) + x + b", "sine-drift");
    }
    if (name == "identity") {
        return parse_map("x", "identity");
    }
    throw UnknownBuiltin("unknown builtin map: " + name);
}

std::vector<std::string> builtin_map_names() { return {"sine-drift", "identity"}; }

BuiltinLFamily builtin_lfamily(const std::string& name) {
    BuiltinLFamily fam;
    fam.system = parse_lsystem(kLWordRules);
    if (name == "lfam-gamma-cos") {
        fam.bindings.by_letter = {parse_map("gamma(x + 1)", "A"),
                                  parse_map("cos(x)", "B")};
        return fam;
    }
    if (name == "lfam-gamma-sin") {
        fam.bindings.by_letter = {
            parse_map("isint(x) ? gamma(x + 0.5) : gamma(x)", "A"),
            parse_map("sinpi(x)", "B")};
        return fam;
    }
    throw UnknownBuiltin("unknown builtin L-family: " + name);
}

std::vector<std::string> builtin_lfamily_names() {
    return {"lfam-gamma-cos", "lfam-gamma-sin"};
}

}  // namespace helixlab
