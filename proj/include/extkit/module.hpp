#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "extkit/f2.hpp"
#include "extkit/steenrod.hpp"

namespace extkit {
namespace module {

// Finite graded F2 module with squaring-operation action, truncated to the
// window [t_min, t_max].  Action matrices are stored sparsely; an absent
// entry is the zero map, and anything landing above t_max is truncated.
struct Module {
  int t_min = 0;
  int t_max = -1;
  std::map<int, std::vector<std::string>> labels;
  std::map<std::pair<int, int>, f2::Matrix> action;  // key (i, d)

  int dim(int d) const {
    auto it = labels.find(d);
    return it == labels.end() ? 0 : static_cast<int>(it->second.size());
  }

  // Action matrix of Sq^i out of degree d, materialized with correct shape.
  f2::Matrix sq_matrix(int i, int d) const {
    if (i == 0) {
      f2::Matrix id(dim(d), dim(d));
      for (int k = 0; k < dim(d); ++k) id.set(k, k, true);
      return id;
    }
    auto it = action.find({i, d});
    if (it != action.end()) return it->second;
    return f2::Matrix(dim(d + i), dim(d));
  }

  f2::Vec sq(int i, int d, const f2::Vec& v) const {
    if (i == 0) return v;
    auto it = action.find({i, d});
    if (it == action.end()) return f2::Vec(dim(d + i));
    return it->second.apply(v);
  }

  f2::Vec word(const steenrod::Word& w, int d, f2::Vec v) const {
    const int dfinal = d + steenrod::degree(w);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      v = sq(*it, d, v);
      d += *it;
      if (v.zero()) return f2::Vec(dim(dfinal));
    }
    return v;
  }

  void set_sq(int i, int d, f2::Matrix m) {
    bool nonzero = false;
    for (std::size_t r = 0; r < m.rows() && !nonzero; ++r)
      nonzero = !m.row(r).zero();
    if (nonzero) action[{i, d}] = std::move(m);
  }
};

// Degreewise map of modules; comp[d] has shape dim_dst(d) x dim_src(d).
// The referenced modules must outlive the map.
struct ModuleMap {
  const Module* src = nullptr;
  const Module* dst = nullptr;
  std::map<int, f2::Matrix> comp;

  f2::Matrix at(int d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return f2::Matrix(dst->dim(d), src->dim(d));
  }
};

inline Module sphere(int m, int t_max = -1) {
  if (t_max < m) t_max = m;
  Module M;
  M.t_min = m;
  M.t_max = t_max;
  M.labels[m] = {"x" + std::to_string(m)};
  return M;
}

// Cells in every degree from N through t_max, with the binomial action.
// A window below the bottom cell is a usage error, not an empty module.
inline Module stunted_projective(int N, int t_max) {
  if (N < 1) throw usage_error("stunted_projective: bottom degree must be positive");
  if (t_max < N) throw usage_error("stunted_projective: window top below bottom cell");
  Module M;
  M.t_min = N;
  M.t_max = t_max;
  for (int d = N; d <= t_max; ++d) M.labels[d] = {"x" + std::to_string(d)};
  for (int d = N; d <= t_max; ++d)
    for (int i = 1; d + i <= t_max; ++i)
      if (steenrod::binom_odd(d, i)) {
        f2::Matrix m(1, 1);
        m.set(0, 0, true);
        M.action[{i, d}] = std::move(m);
      }
  return M;
}

inline Module suspend(const Module& M, int j) {
  Module S;
  S.t_min = M.t_min + j;
  S.t_max = M.t_max + j;
  for (const auto& [d, ls] : M.labels) S.labels[d + j] = ls;
  for (const auto& [key, m] : M.action) S.action[{key.first, key.second + j}] = m;
  return S;
}

inline Module direct_sum(const Module& A, const Module& B) {
  Module S;
  S.t_min = std::min(A.t_min, B.t_min);
  S.t_max = std::max(A.t_max, B.t_max);
  std::map<int, int> ad;  // A's dim per degree, for offsets
  for (int d = S.t_min; d <= S.t_max; ++d) {
    std::vector<std::string> ls;
    for (int k = 0; k < A.dim(d); ++k) ls.push_back(A.labels.at(d)[k]);
    for (int k = 0; k < B.dim(d); ++k) {
      std::string l = B.labels.at(d)[k];
      while (std::find(ls.begin(), ls.end(), l) != ls.end()) l = "r_" + l;
      ls.push_back(l);
    }
    if (!ls.empty()) S.labels[d] = std::move(ls);
    ad[d] = A.dim(d);
  }
  for (int d = S.t_min; d <= S.t_max; ++d)
    for (int i = 1; d + i <= S.t_max; ++i) {
      f2::Matrix am = A.sq_matrix(i, d), bm = B.sq_matrix(i, d);
      if (S.dim(d) == 0 || S.dim(d + i) == 0) continue;
      f2::Matrix m(S.dim(d + i), S.dim(d));
      for (std::size_t r = 0; r < am.rows(); ++r)
        for (std::size_t c = 0; c < am.cols(); ++c)
          if (am.get(r, c)) m.set(r, c, true);
      for (std::size_t r = 0; r < bm.rows(); ++r)
        for (std::size_t c = 0; c < bm.cols(); ++c)
          if (bm.get(r, c)) m.set(ad[d + i] + r, ad[d] + c, true);
      S.set_sq(i, d, std::move(m));
    }
  return S;
}

// Verifies that every defining relation of the algebra kills every basis
// element inside the window.  Returns human-readable violations.
inline std::vector<std::string> check_module(const Module& M) {
  std::vector<std::string> out;
  for (int d = M.t_min; d <= M.t_max; ++d) {
    if (M.dim(d) == 0) continue;
    for (int b = 1; d + b <= M.t_max; ++b)
      for (int a = 1; a < 2 * b && d + a + b <= M.t_max; ++a) {
        f2::Matrix lhs = f2::mul(M.sq_matrix(a, d + b), M.sq_matrix(b, d));
        f2::Matrix rhs(M.dim(d + a + b), M.dim(d));
        for (const auto& w : steenrod::adem_rhs(a, b)) {
          if (w.size() == 1) {
            f2::Matrix t = M.sq_matrix(w[0], d);
            for (std::size_t r = 0; r < t.rows(); ++r) rhs.row(r) ^= t.row(r);
          } else {
            f2::Matrix t = f2::mul(M.sq_matrix(w[0], d + w[1]), M.sq_matrix(w[1], d));
            for (std::size_t r = 0; r < t.rows(); ++r) rhs.row(r) ^= t.row(r);
          }
        }
        if (!(lhs == rhs)) {
          std::ostringstream os;
          os << "relation (" << a << "," << b << ") fails on degree " << d;
          out.push_back(os.str());
        }
      }
  }
  return out;
}

// Degreewise commutation of the map with every Sq^i inside the window.
inline std::vector<std::string> check_module_map(const ModuleMap& f) {
  std::vector<std::string> out;
  const Module& A = *f.src;
  const Module& B = *f.dst;
  for (int d = A.t_min; d <= A.t_max; ++d)
    for (int i = 1; d + i <= A.t_max; ++i) {
      if (d + i > B.t_max) continue;
      f2::Matrix viaA = f2::mul(f.at(d + i), A.sq_matrix(i, d));
      f2::Matrix viaB = f2::mul(B.sq_matrix(i, d), f.at(d));
      if (!(viaA == viaB)) {
        std::ostringstream os;
        os << "Sq^" << i << " not preserved out of degree " << d;
        out.push_back(os.str());
      }
    }
  return out;
}

// Checks 0 -> A -f-> B -g-> C -> 0: equivariance of both maps and
// degreewise exactness by rank bookkeeping.
inline std::vector<std::string> ses_check(const ModuleMap& f, const ModuleMap& g) {
  std::vector<std::string> out = check_module_map(f);
  for (auto& s : check_module_map(g)) out.push_back("second map: " + s);
  const Module& A = *f.src;
  const Module& B = *f.dst;
  const Module& C = *g.dst;
  if (f.dst != g.src) out.push_back("middle modules differ");
  for (int d = B.t_min; d <= B.t_max; ++d) {
    std::size_t rf = f2::rank(f.at(d));
    std::size_t rg = f2::rank(g.at(d));
    std::ostringstream os;
    os << "degree " << d << ": ";
    if (rf != static_cast<std::size_t>(A.dim(d)))
      out.push_back(os.str() + "first map not injective");
    if (rg != static_cast<std::size_t>(C.dim(d)))
      out.push_back(os.str() + "second map not surjective");
    f2::Matrix gf = f2::mul(g.at(d), f.at(d));
    bool zero = true;
    for (std::size_t r = 0; r < gf.rows(); ++r) zero = zero && gf.row(r).zero();
    if (!zero) out.push_back(os.str() + "composite nonzero");
    if (rf + rg != static_cast<std::size_t>(B.dim(d)))
      out.push_back(os.str() + "middle ranks do not add up");
  }
  return out;
}

// Homology of the degree-one operation per degree.  Below t_min the module
// is genuinely zero, so the incoming map there is the zero map; above t_max
// it is truncated, so the top degree has no computable outgoing map and is
// excluded from the report.
inline std::map<int, int> margolis_h1(const Module& M) {
  std::map<int, int> out;
  for (int d = M.t_min; d + 1 <= M.t_max; ++d) {
    long kd = M.dim(d) - static_cast<long>(f2::rank(M.sq_matrix(1, d)));
    long im = static_cast<long>(f2::rank(M.sq_matrix(1, d - 1)));
    out[d] = static_cast<int>(kd - im);
  }
  return out;
}

// Splits off the one-dimensional bottom class.  Note the A-linear
// orientation: the complement (everything above the bottom degree) is the
// genuine submodule, and the bottom sphere is the quotient, because squares
// out of the bottom class may land in the complement but nothing maps down.
struct BottomSplit {
  Module bottom;      // sphere in degree t_min
  Module complement;  // degrees t_min+1 .. t_max
};

inline BottomSplit split_bottom(const Module& M) {
  if (M.dim(M.t_min) != 1)
    throw usage_error("split_bottom: bottom of the window is not one-dimensional");
  BottomSplit r;
  r.bottom = sphere(M.t_min, M.t_max);
  r.complement.t_min = M.t_min + 1;
  r.complement.t_max = M.t_max;
  for (const auto& [d, ls] : M.labels)
    if (d > M.t_min) r.complement.labels[d] = ls;
  for (const auto& [key, m] : M.action)
    if (key.second > M.t_min) r.complement.action[key] = m;
  return r;
}

// First map of the short exact sequence complement -> M -> bottom.
inline ModuleMap complement_inclusion(const BottomSplit& s, const Module& M) {
  ModuleMap f;
  f.src = &s.complement;
  f.dst = &M;
  for (int d = s.complement.t_min; d <= s.complement.t_max; ++d) {
    int n = s.complement.dim(d);
    if (n == 0) continue;
    f2::Matrix m(M.dim(d), n);
    for (int k = 0; k < n; ++k) m.set(k, k, true);  // same basis order
    f.comp[d] = std::move(m);
  }
  return f;
}

inline ModuleMap bottom_projection(const BottomSplit& s, const Module& M) {
  ModuleMap g;
  g.src = &M;
  g.dst = &s.bottom;
  f2::Matrix m(1, M.dim(M.t_min));
  m.set(0, 0, true);
  g.comp[M.t_min] = std::move(m);
  return g;
}

// ---- the two-cell-plus-tail module -------------------------------------

struct YModel {
  Module m;
  std::vector<int> forced;  // indices i with a forced nonzero Sq^i on the bottom
  std::string note;         // assumption statement for reports
};

// Bottom class y in degree 2n with Sq^1 y = z_{2n+1} onto a suspended
// stunted tail.  The higher action on y is underdetermined; we take the
// minimal table consistent with the algebra relations: unknowns eps_i
// (i >= 2), all window-visible relations on y as linear equations, reduced
// row echelon form, free variables zero.
inline YModel y_module(int n, int t_max) {
  if (n < 1) throw usage_error("y_module: parameter must be positive");
  if (t_max < 2 * n + 1) throw usage_error("y_module: window must reach the first tail cell");
  const int imax = t_max - 2 * n;
  // unknown eps_i lives at column i-2
  const int ncols = imax - 1;
  std::vector<std::pair<f2::Vec, bool>> eqs;
  for (int b = 1; b <= imax; ++b)
    for (int a = 1; a < 2 * b && a + b <= imax; ++a) {
      f2::Vec row(ncols);
      bool c = false;
      if (b == 1) {
        if (steenrod::binom_odd(2 * n, a)) c = !c;
      } else if (steenrod::binom_odd(2 * n + b - 1, a)) {
        row.flip(b - 2);
      }
      if (steenrod::binom_odd(b - 1, a)) row.flip(a + b - 2);
      if (steenrod::binom_odd(b - 2, a - 2) && steenrod::binom_odd(2 * n, a + b - 1)) c = !c;
      for (int cc = 2; cc <= a / 2; ++cc)
        if (steenrod::binom_odd(b - cc - 1, a - 2 * cc) &&
            steenrod::binom_odd(2 * n + cc - 1, a + b - cc))
          row.flip(cc - 2);
      if (!row.zero() || c) eqs.emplace_back(std::move(row), c);
    }
  f2::Matrix sys(eqs.size(), ncols);
  f2::Vec rhs(eqs.size());
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    sys.row(r) = eqs[r].first;
    if (eqs[r].second) rhs.set(r, true);
  }
  auto eps = f2::solve(sys, rhs);
  if (!eps.has_value())
    throw std::runtime_error("y_module: no action table satisfies the relations");

  YModel Y;
  Y.m.t_min = 2 * n;
  Y.m.t_max = t_max;
  Y.m.labels[2 * n] = {"y" + std::to_string(2 * n)};
  for (int d = 2 * n + 1; d <= t_max; ++d) Y.m.labels[d] = {"z" + std::to_string(d)};
  // tail: suspended stunted action Sq^i z_j = C(j-1, i) z_{j+i}
  for (int d = 2 * n + 1; d <= t_max; ++d)
    for (int i = 1; d + i <= t_max; ++i)
      if (steenrod::binom_odd(d - 1, i)) {
        f2::Matrix m(1, 1);
        m.set(0, 0, true);
        Y.m.action[{i, d}] = std::move(m);
      }
  f2::Matrix one(1, 1);
  one.set(0, 0, true);
  Y.m.action[{1, 2 * n}] = one;
  for (int i = 2; i <= imax; ++i)
    if (eps->get(i - 2)) {
      Y.m.action[{i, 2 * n}] = one;
      Y.forced.push_back(i);
    }
  std::ostringstream os;
  os << "model assumption: action on the bottom class above Sq^1 is the minimal "
        "relation-consistent table;";
  if (Y.forced.empty()) {
    os << " all higher operations on it vanish in this window";
  } else {
    os << " forced nonzero:";
    for (int i : Y.forced) os << " Sq^" << i;
  }
  Y.note = os.str();
  return Y;
}

// ---- text format --------------------------------------------------------

inline std::string dump_module(const Module& M) {
  std::ostringstream os;
  for (const auto& [d, ls] : M.labels)
    for (const auto& l : ls) os << "gen " << l << " " << d << "\n";
  // action lines ordered by (degree, operation index, source column)
  std::vector<std::pair<std::pair<int, int>, const f2::Matrix*>> keys;
  for (const auto& [key, m] : M.action) keys.push_back({{key.second, key.first}, &m});
  std::sort(keys.begin(), keys.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [di, mp] : keys) {
    int d = di.first, i = di.second;
    for (std::size_t c = 0; c < mp->cols(); ++c) {
      std::string rhs;
      for (std::size_t r = 0; r < mp->rows(); ++r)
        if (mp->get(r, c)) {
          if (!rhs.empty()) rhs += "+";
          rhs += M.labels.at(d + i)[r];
        }
      if (!rhs.empty())
        os << "sq " << i << " " << M.labels.at(d)[c] << " = " << rhs << "\n";
    }
  }
  return os.str();
}

inline Module parse_module(std::istream& in) {
  Module M;
  std::map<std::string, std::pair<int, int>> where;  // label -> (degree, index)
  struct SqLine {
    int line, i;
    std::string src;
    std::vector<std::string> dst;
  };
  std::vector<SqLine> sqs;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw usage_error("line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "gen") {
      std::string label;
      int d;
      if (!(ls >> label >> d)) fail("expected 'gen <label> <degree>'");
      if (where.count(label)) fail("duplicate label '" + label + "'");
      if (ls >> tok) fail("trailing text after gen line");
      where[label] = {d, M.dim(d)};
      M.labels[d].push_back(label);
    } else if (tok == "sq") {
      SqLine s;
      s.line = lineno;
      std::string eq, rhs;
      if (!(ls >> s.i >> s.src >> eq) || eq != "=")
        fail("expected 'sq <i> <label> = <label>(+<label>)*'");
      if (s.i < 1) fail("operation index must be positive");
      if (!(ls >> rhs)) fail("missing right-hand side");
      if (ls >> tok) fail("unexpected trailing text");
      std::size_t pos = 0;
      while (pos != std::string::npos) {
        auto plus = rhs.find('+', pos);
        std::string part = rhs.substr(pos, plus == std::string::npos ? plus : plus - pos);
        if (part.empty()) fail("empty summand");
        s.dst.push_back(part);
        pos = plus == std::string::npos ? plus : plus + 1;
      }
      sqs.push_back(std::move(s));
    } else {
      fail("unknown directive '" + tok + "'");
    }
  }
  if (!M.labels.empty()) {
    M.t_min = M.labels.begin()->first;
    M.t_max = M.labels.rbegin()->first;
  }
  std::map<std::pair<int, int>, f2::Matrix> act;
  for (const auto& s : sqs) {
    lineno = s.line;
    auto src = where.find(s.src);
    if (src == where.end()) fail("unknown label '" + s.src + "'");
    int d = src->second.first;
    auto key = std::make_pair(s.i, d);
    auto it = act.find(key);
    if (it == act.end())
      it = act.emplace(key, f2::Matrix(M.dim(d + s.i), M.dim(d))).first;
    for (const auto& l : s.dst) {
      auto dst = where.find(l);
      if (dst == where.end()) fail("unknown label '" + l + "'");
      if (dst->second.first != d + s.i)
        fail("label '" + l + "' is not in degree " + std::to_string(d + s.i));
      if (it->second.get(dst->second.second, src->second.second))
        fail("summand '" + l + "' repeated");
      it->second.set(dst->second.second, src->second.second, true);
    }
  }
  for (auto& [key, m] : act) M.set_sq(key.first, key.second, std::move(m));
  return M;
}

}  // namespace module
}  // namespace extkit
