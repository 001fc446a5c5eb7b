#pragma once

#include <string>
#include <vector>

namespace argpair::corpus {

// Lowercases, splits on whitespace and breaks punctuation into single-char
// tokens. Apostrophes stay inside words; bytes >= 0x80 are treated as word
// characters so UTF-8 survives untouched.
std::vector<std::string> tokenize(const std::string& text);

// Tokenized-and-rejoined form used for verbatim comparisons.
std::string normalize(const std::string& text);

std::string join_tokens(const std::vector<std::string>& tokens);

// Splits on '.', '!' or '?' followed by whitespace (or end of text), with an
// abbreviation guard, and on line breaks.
std::vector<std::string> split_sentences(const std::string& text);

}  // namespace argpair::corpus
