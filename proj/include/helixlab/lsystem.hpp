#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace helixlab {

struct LSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingRule : LSystemError {
    explicit MissingRule(const std::string& letter)
        : LSystemError("no rule for letter '" + letter + "'"), letter(letter) {}
    std::string letter;
};
struct UnknownLetter : LSystemError {
    explicit UnknownLetter(const std::string& letter)
        : LSystemError("letter '" + letter + "' is not in the alphabet"), letter(letter) {}
    std::string letter;
};
struct NonProductive : LSystemError {
    using LSystemError::LSystemError;
};

// A D0L rewriting system. Letters are identifiers; words are sequences of
// letter ids (indexes into `letters`).
struct LSystemSpec {
    std::vector<std::string> letters;        // alphabet, in declaration order
    std::vector<std::vector<int>> rules;     // one body per letter
    std::vector<int> axiom;

    int letter_id(const std::string& name) const;
    const std::string& letter_name(int id) const { return letters.at(id); }
};

// Parses "axiom A; A -> A B; B -> B A". An optional leading
// "alphabet A B;" pins the alphabet explicitly; otherwise it is the set of
// rule left-hand sides.
LSystemSpec parse_lsystem(const std::string& text);

// First n letters of the limit word via lazy substitution. A system whose
// expansion reaches a fixed point shorter than n has a finite limit word;
// that word is cycled to length n.
std::vector<int> lword_stream(const LSystemSpec& sys, std::uint64_t n);

// Closed form for the word of L_1 (A -> AB, B -> BA from axiom A):
// letter n (1-based) is 'A' iff the binary digit sum of n-1 is even.
char tm_letter(std::uint64_t n);

}  // namespace helixlab
