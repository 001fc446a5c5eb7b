#include "corpus/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace argpair::corpus {

namespace {

bool word_char(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c >= 0x80;
}

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> abbr = {
      "mr",  "mrs", "ms",  "dr",  "prof", "st",  "etc", "vs",  "e.g", "i.e",
      "u.s", "u.k", "a.m", "p.m", "no",   "inc", "jr",  "sr",  "est", "approx",
  };
  return abbr;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
      if (!std::isspace(c)) tokens.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string normalize(const std::string& text) { return join_tokens(tokenize(text)); }

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;

  auto flush = [&] {
    size_t b = current.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
      current.clear();
      return;
    }
    size_t e = current.find_last_not_of(" \t\r\n");
    sentences.push_back(current.substr(b, e - b + 1));
    current.clear();
  };

  auto last_word = [&]() {
    // word preceding the terminator, dots kept so "e.g." matches its guard
    int e = static_cast<int>(current.size()) - 1;
    while (e >= 0 && (current[e] == '.' || current[e] == '!' || current[e] == '?')) --e;
    int b = e;
    while (b >= 0 && (word_char(static_cast<unsigned char>(current[b])) || current[b] == '.'))
      --b;
    std::string w = current.substr(b + 1, e - b);
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    return w;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current.push_back(c);
    if (c == '.' || c == '!' || c == '?') {
      // consume terminator runs ("...", "?!")
      while (i + 1 < text.size() &&
             (text[i + 1] == '.' || text[i + 1] == '!' || text[i + 1] == '?')) {
        current.push_back(text[++i]);
      }
      bool at_end = i + 1 >= text.size();
      bool boundary = at_end || std::isspace(static_cast<unsigned char>(text[i + 1]));
      if (boundary && c == '.' && abbreviations().count(last_word())) boundary = false;
      if (boundary) flush();
    }
  }
  flush();
  return sentences;
}

}  // namespace argpair::corpus
