#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "extkit/f2.hpp"
#include "extkit/module.hpp"
#include "extkit/steenrod.hpp"

namespace extkit {
namespace resolve {

// One summand of a differential or chain-map value: word_idx names an
// admissible word of degree word_deg applied to generator gen of the
// target stage.
struct Term {
  int gen, word_deg, word_idx;
};

// Layout of the degree-t slice of a stage's free module: one block per
// generator, of width dim A_{t - deg g}, in generator order.
struct FreeLayout {
  std::vector<int> offset;
  int total = 0;
};

// Minimal free resolution of M over the squaring-operation algebra on the
// window s <= s_max, t <= t_max.  Generators are ordered by (internal
// degree, insertion index).  The module is copied and treated as ground
// truth on every degree; when it stands for a truncation of something
// larger, build it with its window reaching t_max.
class Resolution {
 public:
  module::Module M;
  int s_max = -1;
  int t_max = -1;
  std::vector<std::vector<int>> gen_deg;        // [s] -> degrees, ascending
  std::vector<std::vector<f2::Vec>> diff;       // s=0: into M; s>=1: over layout(s-1, deg)
  std::vector<std::vector<std::vector<Term>>> dsupp;  // sparse form of diff, s>=1

  int gens_at(int s, int t) const {
    if (s < 0 || s >= static_cast<int>(gen_deg.size())) return 0;
    const auto& v = gen_deg[s];
    return static_cast<int>(std::upper_bound(v.begin(), v.end(), t) -
                            std::lower_bound(v.begin(), v.end(), t));
  }

  int first_gen_at(int s, int t) const {
    const auto& v = gen_deg[s];
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), t) - v.begin());
  }

  FreeLayout layout(int s, int t) const {
    FreeLayout L;
    auto& alg = steenrod::algebra();
    for (int gd : gen_deg[s]) {
      L.offset.push_back(L.total);
      if (gd <= t) L.total += alg.dim(t - gd);
    }
    return L;
  }

  // d(w · g) for a stage-s generator, s >= 1, expanded in the slice of
  // stage s-1 described by Lprev = layout(s-1, deg g + deg w).
  f2::Vec translate(int s, int gi, int wdeg, int widx, const FreeLayout& Lprev) const {
    f2::Vec out(Lprev.total);
    auto& alg = steenrod::algebra();
    for (const Term& tm : dsupp[s][gi])
      for (int p : alg.product(wdeg, widx, tm.word_deg, tm.word_idx))
        out.flip(Lprev.offset[tm.gen] + p);
    return out;
  }

  // Augmentation image of w · g for a stage-0 generator.
  f2::Vec aug_image(int gi, const steenrod::Word& w) const {
    return M.word(w, gen_deg[0][gi], diff[0][gi]);
  }

  // Matrix of the map out of the degree-t slice of stage s: the
  // augmentation into M for s = 0, the differential otherwise.
  f2::Matrix slice_matrix(int s, int t) const {
    auto& alg = steenrod::algebra();
    FreeLayout L = layout(s, t);
    FreeLayout Lprev;
    int rows = 0;
    if (s == 0) {
      rows = M.dim(t);
    } else {
      Lprev = layout(s - 1, t);
      rows = Lprev.total;
    }
    f2::Matrix D(rows, L.total);
    int col = 0;
    for (std::size_t gi = 0; gi < gen_deg[s].size(); ++gi) {
      int gd = gen_deg[s][gi];
      if (gd > t) continue;
      for (int widx = 0; widx < alg.dim(t - gd); ++widx, ++col) {
        f2::Vec v = s == 0 ? aug_image(gi, alg.basis(t - gd)[widx])
                           : translate(s, gi, t - gd, widx, Lprev);
        for (std::size_t r = 0; r < v.size(); ++r)
          if (v.get(r)) D.set(r, col, true);
      }
    }
    return D;
  }
};

namespace detail {

inline std::vector<Term> unrank(const FreeLayout& L, const std::vector<int>& degs,
                                int t, const f2::Vec& v) {
  std::vector<Term> out;
  auto& alg = steenrod::algebra();
  for (std::size_t g = 0; g < degs.size(); ++g) {
    if (degs[g] > t) continue;
    int width = alg.dim(t - degs[g]);
    for (int k = 0; k < width; ++k)
      if (v.get(L.offset[g] + k)) out.push_back({static_cast<int>(g), t - degs[g], k});
  }
  return out;
}

template <typename Fn>
inline void for_degrees(int lo, int hi, int threads, Fn&& fn) {
  if (threads <= 1 || hi - lo <= 1) {
    for (int t = lo; t <= hi; ++t) fn(t);
    return;
  }
  std::atomic<int> next{lo};
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k)
    pool.emplace_back([&] {
      for (int t; (t = next.fetch_add(1)) <= hi;) fn(t);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Builds the resolution stage by stage, each stage sweeping internal
// degrees upward.  Kernels of the previous stage are independent across
// degrees and computed first (concurrently when threads > 1); generator
// selection is a sequential sweep, so results never depend on the thread
// count.  A window entirely below the module's bottom degree yields an
// empty resolution.
inline Resolution minimal_resolution(const module::Module& M, int s_max, int t_max,
                                     int threads = 1) {
  Resolution R;
  R.M = M;
  R.s_max = s_max;
  R.t_max = t_max;
  if (s_max < 0) return R;
  R.gen_deg.assign(s_max + 1, {});
  R.diff.assign(s_max + 1, {});
  R.dsupp.assign(s_max + 1, {});
  auto& alg = steenrod::algebra();

  // stage 0: minimal generators of M, bottom degree upward
  for (int t = M.t_min; t <= t_max; ++t) {
    int md = M.dim(t);
    if (md == 0) continue;
    f2::Basis span;
    for (std::size_t gi = 0; gi < R.gen_deg[0].size(); ++gi) {
      int gd = R.gen_deg[0][gi];
      for (int widx = 0; widx < alg.dim(t - gd); ++widx) {
        const steenrod::Word& w = alg.basis(t - gd)[widx];
        if (w.empty()) continue;
        span.add(R.aug_image(gi, w));
      }
    }
    for (int k = 0; k < md; ++k) {
      f2::Vec e(md);
      e.set(k, true);
      if (!span.add(e)) continue;
      R.gen_deg[0].push_back(t);
      R.diff[0].push_back(e);
    }
  }

  for (int s = 1; s <= s_max; ++s) {
    // kernel of the previous stage per degree
    std::vector<std::vector<f2::Vec>> kers(std::max(0, t_max - M.t_min + 1));
    detail::for_degrees(M.t_min, t_max, threads, [&](int t) {
      f2::Matrix D = R.slice_matrix(s - 1, t);
      if (D.cols() != 0) kers[t - M.t_min] = f2::kernel_basis(D);
    });

    // selection sweep, ascending degree
    for (int t = M.t_min; t <= t_max; ++t) {
      const auto& ker = kers[t - M.t_min];
      if (ker.empty()) continue;
      FreeLayout Lsrc = R.layout(s - 1, t);
      f2::Basis span;
      for (std::size_t gi = 0; gi < R.gen_deg[s].size(); ++gi) {
        int gd = R.gen_deg[s][gi];
        for (int widx = 0; widx < alg.dim(t - gd); ++widx) {
          if (t == gd) continue;  // unit word: not in the augmentation ideal
          span.add(R.translate(s, gi, t - gd, widx, Lsrc));
        }
      }
      for (const f2::Vec& kv : ker) {
        f2::Vec v = span.reduce(kv);
        if (v.zero()) continue;
        span.add(v);
        R.gen_deg[s].push_back(t);
        R.dsupp[s].push_back(detail::unrank(Lsrc, R.gen_deg[s - 1], t, v));
        R.diff[s].push_back(std::move(v));
      }
    }
  }
  return R;
}

// Machine checks of the resolution invariants: the composite of two
// consecutive maps vanishes on every generator, no differential carries a
// unit coefficient, the augmentation covers the module, and the kernel at
// each stage is exactly the image of the next.
inline std::vector<std::string> check_resolution(const Resolution& R) {
  std::vector<std::string> out;
  auto& alg = steenrod::algebra();
  auto note = [&](int s, int t, const std::string& what) {
    std::ostringstream os;
    os << "stage " << s << " degree " << t << ": " << what;
    out.push_back(os.str());
  };

  for (int s = 1; s <= R.s_max && s < static_cast<int>(R.gen_deg.size()); ++s)
    for (std::size_t gi = 0; gi < R.gen_deg[s].size(); ++gi) {
      int t = R.gen_deg[s][gi];
      for (const Term& tm : R.dsupp[s][gi])
        if (tm.word_deg == 0) note(s, t, "unit coefficient in differential");
      if (s == 1) {
        f2::Vec img(R.M.dim(t));
        for (const Term& tm : R.dsupp[s][gi])
          img ^= R.aug_image(tm.gen, alg.basis(tm.word_deg)[tm.word_idx]);
        if (!img.zero()) note(s, t, "composite with augmentation nonzero");
      } else {
        FreeLayout Lprev = R.layout(s - 2, t);
        f2::Vec img(Lprev.total);
        for (const Term& tm : R.dsupp[s][gi])
          img ^= R.translate(s - 1, tm.gen, tm.word_deg, tm.word_idx, Lprev);
        if (!img.zero()) note(s, t, "composite of differentials nonzero");
      }
    }

  for (int t = R.M.t_min; t <= R.t_max; ++t) {
    if (R.gen_deg.empty()) break;
    f2::Matrix E = R.slice_matrix(0, t);
    if (f2::rank(E) != static_cast<std::size_t>(R.M.dim(t)))
      note(0, t, "augmentation not surjective");
  }

  for (int s = 0; s < R.s_max; ++s)
    for (int t = R.M.t_min; t <= R.t_max; ++t) {
      f2::Matrix D = R.slice_matrix(s, t);
      std::size_t nullity = D.cols() - f2::rank(D);
      std::size_t image = f2::rank(R.slice_matrix(s + 1, t));
      if (nullity != image) note(s, t, "kernel differs from next image");
    }
  return out;
}

// Chart of Ext dimensions read off the generator counts, with the
// degree-one products extracted from the differentials: the matrix at
// (s,t) maps Ext^{s,t} to Ext^{s+1,t+1}, entry = coefficient of the
// degree-one word on the column generator inside the row generator's
// differential.
struct ExtChart {
  int s_max = -1;
  int t_max = -1;
  std::map<std::pair<int, int>, int> dims;
  std::map<std::pair<int, int>, f2::Matrix> h0;

  int dim(int s, int t) const {
    auto it = dims.find({s, t});
    return it == dims.end() ? 0 : it->second;
  }
};

inline ExtChart ext_chart(const Resolution& R) {
  ExtChart C;
  C.s_max = R.s_max;
  C.t_max = R.t_max;
  for (int s = 0; s < static_cast<int>(R.gen_deg.size()); ++s)
    for (int d : R.gen_deg[s]) ++C.dims[{s, d}];
  for (int s = 1; s <= R.s_max && s < static_cast<int>(R.gen_deg.size()); ++s) {
    for (int t : R.gen_deg[s]) {
      int rows = R.gens_at(s, t);
      int cols = R.gens_at(s - 1, t - 1);
      if (rows == 0 || cols == 0 || C.h0.count({s - 1, t - 1})) continue;
      f2::Matrix m(rows, cols);
      int r0 = R.first_gen_at(s, t);
      int c0 = R.first_gen_at(s - 1, t - 1);
      for (int r = 0; r < rows; ++r)
        for (const Term& tm : R.dsupp[s][r0 + r])
          if (tm.word_deg == 1 && tm.gen >= c0 && tm.gen < c0 + cols)
            m.set(r, tm.gen - c0, true);
      C.h0[{s - 1, t - 1}] = std::move(m);
    }
  }
  return C;
}

// Map on Ext induced by a module map f: P -> Q, computed from a chain-map
// lift of f through the two resolutions.  Contravariant: the result takes
// the chart of Q (the map's target) to the chart of P (its source); the
// matrix at (s,t) has one row per P-generator and one column per
// Q-generator there.  Failure to lift means f was not equivariant.
struct ChartMap {
  std::string direction;
  std::map<std::pair<int, int>, f2::Matrix> mats;
};

inline ChartMap induced_ext_map(const module::ModuleMap& f, const Resolution& RP,
                                const Resolution& RQ) {
  auto& alg = steenrod::algebra();
  const int s_top = std::min(RP.s_max, RQ.s_max);
  const int t_top = std::min(RP.t_max, RQ.t_max);

  // phi[s][gi]: image of the stage-s P-generator gi in stage s of Q,
  // stored sparsely as words applied to Q-generators.
  std::vector<std::vector<std::vector<Term>>> phi(s_top + 1);
  for (int s = 0; s <= s_top; ++s) {
    for (std::size_t gi = 0; gi < RP.gen_deg[s].size(); ++gi) {
      int t = RP.gen_deg[s][gi];
      if (t > t_top) break;
      FreeLayout L = RQ.layout(s, t);
      f2::Vec rhs;
      if (s == 0) {
        rhs = f.at(t).apply(RP.diff[0][gi]);
      } else {
        FreeLayout Lprev = RQ.layout(s - 1, t);
        rhs = f2::Vec(Lprev.total);
        for (const Term& dm : RP.dsupp[s][gi])
          for (const Term& pm : phi[s - 1][dm.gen])
            for (int p : alg.product(dm.word_deg, dm.word_idx, pm.word_deg, pm.word_idx))
              rhs.flip(Lprev.offset[pm.gen] + p);
      }
      auto x = f2::solve(RQ.slice_matrix(s, t), rhs);
      if (!x.has_value())
        throw usage_error("induced_ext_map: no chain lift exists; the module map "
                          "does not commute with the action");
      phi[s].push_back(detail::unrank(L, RQ.gen_deg[s], t, *x));
    }
  }

  ChartMap out;
  out.direction = "contravariant: takes the target module's chart to the source module's";
  for (int s = 0; s <= s_top; ++s)
    for (int t = 0; t <= t_top; ++t) {
      int rows = RP.gens_at(s, t);
      int cols = RQ.gens_at(s, t);
      if (rows == 0 || cols == 0) continue;
      f2::Matrix m(rows, cols);
      int r0 = RP.first_gen_at(s, t);
      int c0 = RQ.first_gen_at(s, t);
      for (int r = 0; r < rows; ++r) {
        if (r0 + r >= static_cast<int>(phi[s].size())) continue;
        for (const Term& tm : phi[s][r0 + r])
          if (tm.word_deg == 0 && tm.gen >= c0 && tm.gen < c0 + cols)
            m.set(r, tm.gen - c0, true);
      }
      out.mats[{s, t}] = std::move(m);
    }
  return out;
}

// Dimension-level consequence of the long exact sequence of a short exact
// sequence A -> B -> C: at every bidegree inside the safe window the
// middle chart is at most the sum of the outer two.
inline std::vector<std::string> subadditivity_check(const ExtChart& A, const ExtChart& B,
                                                    const ExtChart& C) {
  std::vector<std::string> out;
  int s_safe = std::min({A.s_max, B.s_max, C.s_max}) - 1;
  int t_safe = std::min({A.t_max, B.t_max, C.t_max}) - 1;
  for (const auto& [st, db] : B.dims) {
    auto [s, t] = st;
    if (s > s_safe || t > t_safe) continue;
    if (db > A.dim(s, t) + C.dim(s, t)) {
      std::ostringstream os;
      os << "bidegree (" << s << "," << t << "): middle " << db << " exceeds "
         << A.dim(s, t) << " + " << C.dim(s, t);
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace resolve
}  // namespace extkit
