#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pfword/errors.hpp"

namespace pfword {

// Finite ordered alphabet. Symbols are distinct non-empty labels mapped to
// dense indices at construction; immutable afterwards and shared between
// words, so it is safe to use from concurrent tasks.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols)
      : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2)
      throw DomainError("alphabet needs at least 2 symbols");
    single_char_ = true;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const std::string& s = symbols_[i];
      if (s.empty()) throw DomainError("alphabet symbols must be non-empty");
      if (!index_.emplace(s, i).second)
        throw DomainError("duplicate alphabet symbol: " + s);
      if (s.size() != 1) single_char_ = false;
    }
  }

  std::size_t size() const noexcept { return symbols_.size(); }

  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }

  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  std::optional<std::size_t> index_of(std::string_view s) const {
    auto it = index_.find(std::string(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool single_char_symbols() const noexcept { return single_char_; }

  bool same_symbols(const Alphabet& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
  bool single_char_ = false;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> symbols) {
  return std::make_shared<const Alphabet>(std::move(symbols));
}

// Parses a comma-separated symbol list, e.g. "a,b,c".
inline AlphabetPtr parse_alphabet(std::string_view text) {
  std::vector<std::string> symbols;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    symbols.emplace_back(text.substr(start, end - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (symbols.empty() || (symbols.size() == 1 && symbols[0].empty()))
    throw ParseError("empty alphabet specification");
  return make_alphabet(std::move(symbols));
}

// Fixed-length sequence of alphabet symbol indices. Immutable by
// convention: operations never mutate a word in place.
class Word {
 public:
  Word(AlphabetPtr alphabet, std::vector<std::uint32_t> symbols)
      : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
    if (!alphabet_) throw DomainError("word requires an alphabet");
    if (symbols_.empty()) throw DomainError("word must have positive length");
    for (std::uint32_t s : symbols_)
      if (s >= alphabet_->size())
        throw DomainError("word symbol index out of range");
  }

  std::size_t length() const noexcept { return symbols_.size(); }

  std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }

  const std::vector<std::uint32_t>& symbols() const noexcept { return symbols_; }

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }

  // Comma-joined symbol labels, the canonical text form.
  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (i > 0) out += ',';
      out += alphabet_->symbol(symbols_[i]);
    }
    return out;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.symbols_ == b.symbols_ &&
           (a.alphabet_ == b.alphabet_ ||
            a.alphabet_->same_symbols(*b.alphabet_));
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  AlphabetPtr alphabet_;
  std::vector<std::uint32_t> symbols_;
};

// Parses "a,b,c"; as a convenience an unseparated string ("abc") is accepted
// when every alphabet symbol is a single character.
inline Word parse_word(const AlphabetPtr& alphabet, std::string_view text) {
  if (!alphabet) throw DomainError("parse_word requires an alphabet");
  std::vector<std::uint32_t> indices;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      const std::size_t end =
          comma == std::string_view::npos ? text.size() : comma;
      const std::string_view token = text.substr(start, end - start);
      const auto idx = alphabet->index_of(token);
      if (!idx)
        throw ParseError("unknown symbol '" + std::string(token) + "'");
      indices.push_back(static_cast<std::uint32_t>(*idx));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else if (auto whole = alphabet->index_of(text)) {
    indices.push_back(static_cast<std::uint32_t>(*whole));
  } else if (alphabet->single_char_symbols()) {
    for (char c : text) {
      const auto idx = alphabet->index_of(std::string_view(&c, 1));
      if (!idx)
        throw ParseError(std::string("unknown symbol '") + c + "'");
      indices.push_back(static_cast<std::uint32_t>(*idx));
    }
  } else {
    throw ParseError("cannot parse word '" + std::string(text) +
                     "': not a symbol and alphabet is not single-character");
  }
  if (indices.empty()) throw ParseError("empty word");
  return Word(alphabet, std::move(indices));
}

// Privacy calibration: epsilon >= 0 (0 gives the uniform mechanism) and the
// adjacency radius b >= 1. All mechanism exponents use epsilon / (2 b),
// since b bounds the utility sensitivity.
struct PrivacyParams {
  double epsilon;
  unsigned adjacency;

  PrivacyParams(double epsilon_, unsigned adjacency_)
      : epsilon(epsilon_), adjacency(adjacency_) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
      throw DomainError("epsilon must be a finite non-negative real");
    if (adjacency < 1) throw DomainError("adjacency must be >= 1");
  }

  double exponent_scale() const noexcept {
    return epsilon / (2.0 * static_cast<double>(adjacency));
  }
};

namespace detail {
inline void require_comparable(const Word& w, const Word& v) {
  if (w.length() != v.length())
    throw DimensionError("words differ in length");
  if (w.alphabet() != v.alphabet() &&
      !w.alphabet()->same_symbols(*v.alphabet()))
    throw DimensionError("words carry different alphabets");
}
}  // namespace detail

// Number of positions where the two words differ.
inline std::size_t hamming_distance(const Word& w, const Word& v) {
  detail::require_comparable(w, v);
  std::size_t d = 0;
  for (std::size_t i = 0; i < w.length(); ++i)
    if (w[i] != v[i]) ++d;
  return d;
}

// Utility of releasing v in place of w: the negated Hamming distance.
inline std::int64_t utility(const Word& w, const Word& v) {
  return -static_cast<std::int64_t>(hamming_distance(w, v));
}

inline bool is_adjacent(const Word& w, const Word& v, unsigned b) {
  return hamming_distance(w, v) <= b;
}

}  // namespace pfword
