#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wesma {

// Minimal UTF-8 / character-class layer for the scripts this project
// processes (Latin incl. accents, Greek, Cyrillic, Devanagari, Tamil).
// Classification outside those ranges falls back to "not a word character",
// which the tokenizer treats as a boundary.

std::vector<char32_t> utf8_decode(std::string_view s); // invalid bytes -> U+FFFD
std::string utf8_encode(std::span<const char32_t> cps);

// Simple (one-to-one) case folding over the covered ranges.
char32_t fold_case(char32_t c);

bool is_letter(char32_t c);
bool is_digit_char(char32_t c);
bool is_combining_mark(char32_t c);
bool is_space_char(char32_t c);
bool is_control_char(char32_t c);

// Canonical composition over a curated table of Latin base+mark pairs
// (the precomposed forms French text uses). Sequences outside the table
// pass through untouched, which for the Indic scripts generated here is
// already the canonical form.
void compose_canonical(std::vector<char32_t>& cps);

} // namespace wesma
