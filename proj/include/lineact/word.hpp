#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lineact/line_map.hpp"

namespace lineact {

struct Letter {
  int generator = 0;
  long exponent = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Reduced word over a generating set: adjacent letters use distinct
/// generators and no exponent is zero. Letters are read left to right as
/// composition, so the word (a, b) realizes a o b.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  static Word generator(int index, long exponent = 1) { return Word({Letter{index, exponent}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  /// Sum of |exponent|.
  long length() const;

  Word inverse() const;
  Word operator*(const Word& rhs) const;

  /// "a^2 b^-1"; the empty word prints as "e".
  std::string to_string(const std::vector<std::string>& names) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// [u, v] = u v u^-1 v^-1.
Word commutator(const Word& u, const Word& v);

struct Generator {
  std::string name;
  LineMap map;
};

/// A finitely generated group of homeomorphisms of the line, given by its
/// generators.
struct Action {
  std::string name;
  std::vector<Generator> generators;

  bool all_pl() const;
  std::vector<std::string> names() const;
  LineMap realize(const Word& w) const;
  std::string format(const Word& w) const { return w.to_string(names()); }
};

struct Element {
  Word word;
  LineMap map;
};

struct EnumerateOptions {
  bool include_identity = false;
  /// Merge words realizing the same map. Only possible for PL actions; for
  /// other actions every reduced word is returned.
  bool dedup = true;
};

/// Elements realized by reduced words of length <= max_len, shortest words
/// first, in a deterministic order. With dedup each group element appears
/// once, with its first (shortest) word.
std::vector<Element> enumerate_elements(const Action& action, int max_len, EnumerateOptions options = {});

/// Number of worker threads: LINE_ACTIONS_THREADS when set, else hardware.
std::size_t worker_count();

}  // namespace lineact
