#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "milnor/random.hpp"
#include "milnor/string_link.hpp"

namespace milnor {

// σ_generator^power with generator in 1..k-1 and power ±1.
struct BraidLetter {
  int generator = 1;
  int power = 1;
  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

using BraidWord = std::vector<BraidLetter>;

// Parses whitespace-separated tokens such as "s1 s2^-1 s1^1".
BraidWord parse_braid(std::string_view text);
std::string format_braid(const BraidWord& word);

// True when the word's permutation is the identity.
bool is_pure(const BraidWord& word, int k);

// Strands run in +y through one crossing gadget per letter. For σ_p the
// strand at position p moves to p+1; the other strand moves back and passes
// over for power +1, under for power -1. Positive letters give positive
// crossings under the right-handed convention seen from +z.
StringLink from_braid(const BraidWord& word, int k, double radius = 1.0);

StringLink make_unlink(int k, double radius = 1.0);

// Braid word in which strand j, moving in +y, passes under and then over
// strand i and passes over every strand in between both times.
BraidWord axis_link_word(int i, int j, int k = 3);
StringLink make_axis_link(int i, int j, double radius = 1.0);

BraidWord borromean_word();
StringLink make_borromean(double radius = 1.0);

// unlink, l12, l13, l23 (any lij), borromean; throws InputError otherwise.
StringLink make_named_link(std::string_view name, double radius = 1.0);

// A pure 3-strand word of even length in [2, max_length], drawn by rejection.
BraidWord random_pure_braid(Rng& rng, int max_length = 12, int k = 3);

}  // namespace milnor
