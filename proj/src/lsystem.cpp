#include "helixlab/lsystem.hpp"

#include <bit>
#include <cctype>
#include <map>
#include <sstream>

namespace helixlab {

int LSystemSpec::letter_id(const std::string& name) const {
    for (size_t i = 0; i < letters.size(); ++i) {
        if (letters[i] == name) return static_cast<int>(i);
    }
    throw UnknownLetter(name);
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

LSystemSpec parse_lsystem(const std::string& text) {
    std::vector<std::string> alphabet;
    bool alphabet_declared = false;
    std::vector<std::string> axiom_names;
    std::map<std::string, std::vector<std::string>> rule_names;
    std::vector<std::string> rule_order;

    std::istringstream is(text);
    std::string stmt;
    while (std::getline(is, stmt, ';')) {
        stmt = trim(stmt);
        if (stmt.empty()) continue;
        auto words = split_words(stmt);
        if (words[0] == "alphabet") {
            alphabet.assign(words.begin() + 1, words.end());
            alphabet_declared = true;
            continue;
        }
        if (words[0] == "axiom") {
            axiom_names.assign(words.begin() + 1, words.end());
            continue;
        }
        // rule: LETTER -> BODY...
        if (words.size() < 3 || words[1] != "->") {
            throw LSystemError("cannot parse statement '" + stmt + "'");
        }
        const std::string& lhs = words[0];
        if (rule_names.count(lhs)) {
            throw LSystemError("duplicate rule for letter '" + lhs + "'");
        }
        rule_names[lhs].assign(words.begin() + 2, words.end());
        rule_order.push_back(lhs);
    }

    if (!alphabet_declared) alphabet = rule_order;

    LSystemSpec sys;
    sys.letters = alphabet;
    auto id_of = [&](const std::string& name) {
        for (size_t i = 0; i < sys.letters.size(); ++i) {
            if (sys.letters[i] == name) return static_cast<int>(i);
        }
        if (alphabet_declared) throw UnknownLetter(name);
        throw MissingRule(name);
    };

    sys.rules.resize(sys.letters.size());
    for (const auto& letter : sys.letters) {
        auto it = rule_names.find(letter);
        if (it == rule_names.end()) throw MissingRule(letter);
        auto& body = sys.rules[static_cast<size_t>(id_of(letter))];
        for (const auto& w : it->second) body.push_back(id_of(w));
    }
    for (const auto& [lhs, _] : rule_names) {
        (void)id_of(lhs);  // rejects rules for letters outside a declared alphabet
    }
    for (const auto& w : axiom_names) sys.axiom.push_back(id_of(w));
    if (sys.axiom.empty()) throw LSystemError("missing or empty axiom");
    return sys;
}

std::vector<int> lword_stream(const LSystemSpec& sys, std::uint64_t n) {
    std::vector<int> word = sys.axiom;
    if (word.empty()) throw NonProductive("empty axiom");
    while (word.size() < n) {
        std::vector<int> next;
        next.reserve(std::min<std::uint64_t>(n, word.size() * 2));
        for (int id : word) {
            const auto& body = sys.rules.at(static_cast<size_t>(id));
            if (body.empty()) throw NonProductive("erasing rule for letter '" +
                                                  sys.letter_name(id) + "'");
            next.insert(next.end(), body.begin(), body.end());
            if (next.size() >= n) break;
        }
        if (next == word) {
            // fixed point: finite limit word, cycle it
            std::vector<int> cycled;
            cycled.reserve(n);
            while (cycled.size() < n) {
                for (int id : word) {
                    if (cycled.size() == n) break;
                    cycled.push_back(id);
                }
            }
            return cycled;
        }
        word = std::move(next);
    }
    word.resize(n);
    return word;
}

char tm_letter(std::uint64_t n) {
    if (n == 0) throw LSystemError("tm_letter index is 1-based");
    return (std::popcount(n - 1) % 2 == 0) ? 'A' : 'B';
}

}  // namespace helixlab
