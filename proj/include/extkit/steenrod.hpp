#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "extkit/f2.hpp"

namespace extkit {
namespace steenrod {

// A word is a finite sequence of positive squaring-operation indices;
// the empty word is the algebra unit.
using Word = std::vector<int>;

// C(a, b) mod 2 by the digit criterion.
inline bool binom_odd(long a, long b) {
  return a >= b && b >= 0 && ((a & b) == b);
}

inline int degree(const Word& w) {
  int d = 0;
  for (int i : w) d += i;
  return d;
}

// Admissible: each index at least twice the next.
inline bool is_admissible(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] < 2 * w[i + 1]) return false;
  return true;
}

// Right side of the relation rewriting Sq^a Sq^b for a < 2b.
inline std::vector<Word> adem_rhs(int a, int b) {
  std::vector<Word> out;
  for (int c = 0; c <= a / 2; ++c) {
    if (!binom_odd(b - c - 1, a - 2 * c)) continue;
    if (c == 0)
      out.push_back({a + b});
    else
      out.push_back({a + b - c, c});
  }
  return out;
}

// Shared basis tables and memoized products.  Thread safe; all cached
// values are pure functions of their keys, so fill order is irrelevant.
class Algebra {
 public:
  const std::vector<Word>& basis(int d) {
    std::lock_guard<std::mutex> lk(mu_);
    return basis_locked(d);
  }

  int dim(int d) {
    std::lock_guard<std::mutex> lk(mu_);
    return static_cast<int>(basis_locked(d).size());
  }

  // Index of an admissible word within its degree's basis.
  int index_of(const Word& w) {
    std::lock_guard<std::mutex> lk(mu_);
    return index_locked(w);
  }

  // F2 expansion of an arbitrary word in the admissible basis.
  std::vector<Word> reduce(const Word& w) {
    std::lock_guard<std::mutex> lk(mu_);
    auto s = reduce_locked(w);
    return std::vector<Word>(s.begin(), s.end());
  }

  // Product of two admissible basis elements, as sorted indices in
  // degree d1 + d2.
  const std::vector<int>& product(int d1, int i1, int d2, int i2) {
    std::lock_guard<std::mutex> lk(mu_);
    std::uint64_t key = ((std::uint64_t)(std::uint16_t)d1 << 48) |
                        ((std::uint64_t)(std::uint16_t)i1 << 32) |
                        ((std::uint64_t)(std::uint16_t)d2 << 16) |
                        (std::uint64_t)(std::uint16_t)i2;
    auto it = prod_.find(key);
    if (it != prod_.end()) return it->second;
    Word w = basis_locked(d1)[i1];
    const Word& w2 = basis_locked(d2)[i2];
    w.insert(w.end(), w2.begin(), w2.end());
    std::vector<int> idx;
    for (const Word& adm : reduce_locked(w)) idx.push_back(index_locked(adm));
    std::sort(idx.begin(), idx.end());
    return prod_.emplace(key, std::move(idx)).first->second;
  }

 private:
  const std::vector<Word>& basis_locked(int d) {
    auto it = basis_.find(d);
    if (it != basis_.end()) return it->second;
    std::vector<Word> out;
    enumerate(d, d, {}, out);
    std::sort(out.begin(), out.end());
    return basis_.emplace(d, std::move(out)).first->second;
  }

  static void enumerate(int d, int cap, Word prefix, std::vector<Word>& out) {
    if (d == 0) {
      out.push_back(prefix);
      return;
    }
    for (int a = 1; a <= std::min(d, cap); ++a) {
      prefix.push_back(a);
      enumerate(d - a, a / 2, prefix, out);
      prefix.pop_back();
    }
  }

  int index_locked(const Word& w) {
    const auto& b = basis_locked(degree(w));
    auto it = std::lower_bound(b.begin(), b.end(), w);
    return static_cast<int>(it - b.begin());
  }

  const std::set<Word>& reduce_locked(const Word& w) {
    auto it = red_.find(w);
    if (it != red_.end()) return it->second;
    std::set<Word> acc;
    bool admissible = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      int a = w[i], b = w[i + 1];
      if (a >= 2 * b) continue;
      admissible = false;
      for (const Word& rep : adem_rhs(a, b)) {
        Word nw(w.begin(), w.begin() + i);
        nw.insert(nw.end(), rep.begin(), rep.end());
        nw.insert(nw.end(), w.begin() + i + 2, w.end());
        for (const Word& adm : reduce_locked(nw)) {
          auto pos = acc.find(adm);
          if (pos == acc.end())
            acc.insert(adm);
          else
            acc.erase(pos);
        }
      }
      break;
    }
    if (admissible) acc.insert(w);
    return red_.emplace(w, std::move(acc)).first->second;
  }

  std::mutex mu_;
  std::map<int, std::vector<Word>> basis_;
  std::map<Word, std::set<Word>> red_;
  std::map<std::uint64_t, std::vector<int>> prod_;
};

inline Algebra& algebra() {
  static Algebra a;
  return a;
}

}  // namespace steenrod
}  // namespace extkit
