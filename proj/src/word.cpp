#include "lineact/word.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <unordered_set>

namespace lineact {

Word::Word(std::vector<Letter> letters) {
  for (const Letter& l : letters) {
    if (l.exponent == 0) continue;
    if (!letters_.empty() && letters_.back().generator == l.generator) {
      letters_.back().exponent += l.exponent;
      if (letters_.back().exponent == 0) letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

long Word::length() const {
  long n = 0;
  for (const Letter& l : letters_) n += std::labs(l.exponent);
  return n;
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l.exponent = -l.exponent;
  return Word(std::move(out));
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

std::string Word::to_string(const std::vector<std::string>& names) const {
  if (letters_.empty()) return "e";
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += l.generator < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(l.generator)]
                                                        : "g" + std::to_string(l.generator);
    if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
  }
  return out;
}

Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

bool Action::all_pl() const {
  for (const auto& g : generators) {
    if (!g.map.is_pl()) return false;
  }
  return true;
}

std::vector<std::string> Action::names() const {
  std::vector<std::string> out;
  out.reserve(generators.size());
  for (const auto& g : generators) out.push_back(g.name);
  return out;
}

LineMap Action::realize(const Word& w) const {
  LineMap out;
  for (const Letter& l : w.letters()) {
    if (l.generator < 0 || l.generator >= static_cast<int>(generators.size())) {
      throw Error("word uses generator index " + std::to_string(l.generator) + " outside the action");
    }
    out = compose(out, power(generators[static_cast<std::size_t>(l.generator)].map, l.exponent));
  }
  return out;
}

std::vector<Element> enumerate_elements(const Action& action, int max_len, EnumerateOptions options) {
  const bool dedup = options.dedup && action.all_pl();
  const int n_gens = static_cast<int>(action.generators.size());
  std::vector<LineMap> letter_maps;
  std::vector<Letter> letters;
  for (int i = 0; i < n_gens; ++i) {
    const LineMap& g = action.generators[static_cast<std::size_t>(i)].map;
    letter_maps.push_back(g);
    letters.push_back({i, 1});
    letter_maps.push_back(invert(g));
    letters.push_back({i, -1});
  }

  std::vector<Element> out;
  std::unordered_set<std::string> seen;
  Element identity{Word{}, LineMap::identity()};
  if (dedup) seen.insert(identity.map.pl().key());
  if (options.include_identity) out.push_back(identity);

  // Each level extends only the elements first reached at the previous level.
  std::vector<Element> frontier{identity};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Element> next;
    for (const Element& e : frontier) {
      const auto& ls = e.word.letters();
      for (std::size_t k = 0; k < letters.size(); ++k) {
        const Letter& l = letters[k];
        if (!ls.empty() && ls.back().generator == l.generator && (ls.back().exponent > 0) != (l.exponent > 0)) {
          continue;
        }
        Element child{e.word * Word({l}), compose(e.map, letter_maps[k])};
        if (dedup) {
          if (!seen.insert(child.map.pl().key()).second) continue;
        }
        next.push_back(std::move(child));
      }
    }
    for (const Element& e : next) out.push_back(e);
    frontier = std::move(next);
  }
  return out;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("LINE_ACTIONS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace lineact
