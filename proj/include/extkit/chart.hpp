#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "extkit/resolution.hpp"

namespace extkit {
namespace chart {

// Tab-separated chart rows, one per nonzero bidegree, sorted by
// (t - s, s).  All numbers are formatted without any locale dependence.
inline std::string chart_tsv(const resolve::ExtChart& C) {
  std::vector<std::tuple<int, int, int, int>> rows;  // (stem, s, t, dim)
  for (const auto& [st, d] : C.dims)
    if (d != 0) rows.emplace_back(st.second - st.first, st.first, st.second, d);
  std::sort(rows.begin(), rows.end());
  std::string out = "s\tt\tdim\n";
  for (const auto& [stem, s, t, d] : rows) {
    (void)stem;
    out += std::to_string(s) + "\t" + std::to_string(t) + "\t" + std::to_string(d) + "\n";
  }
  return out;
}

// Every pixel decision for the SVG renderer lives here.
struct SvgLayout {
  int cell = 18;        // grid pitch
  int margin = 34;      // outer margin, leaves room for axis labels
  int dot_radius = 3;
  int dot_gap = 8;      // center distance between dots sharing a bidegree
  int tick_every = 5;   // axis label cadence
  int font_size = 10;
  const char* dot_color = "#1a1a1a";
  const char* link_color = "#7a7a7a";
  const char* grid_color = "#dddddd";
  const char* text_color = "#555555";
};

// Chart as an SVG document: one dot per dimension at (t-s, s), vertical
// links for the degree-one products.  Output is a pure function of the
// chart and layout.
inline std::string chart_svg(const resolve::ExtChart& C, const SvgLayout& L = {}) {
  int stem_lo = 0, stem_hi = 0, s_hi = 0;
  bool any = false;
  for (const auto& [st, d] : C.dims) {
    if (d == 0) continue;
    int stem = st.second - st.first;
    if (!any) {
      stem_lo = stem_hi = stem;
      s_hi = st.first;
      any = true;
    } else {
      stem_lo = std::min(stem_lo, stem);
      stem_hi = std::max(stem_hi, stem);
      s_hi = std::max(s_hi, st.first);
    }
  }

  const int width = 2 * L.margin + (any ? (stem_hi - stem_lo) * L.cell : 0);
  const int height = 2 * L.margin + (any ? s_hi * L.cell : 0);
  auto x_of = [&](int stem) { return L.margin + (stem - stem_lo) * L.cell; };
  auto y_of = [&](int s) { return height - L.margin - s * L.cell; };
  auto dot_x = [&](int stem, int k, int m) {
    return x_of(stem) + (2 * k - (m - 1)) * L.dot_gap / 2;
  };

  std::string out;
  auto num = [](int v) { return std::to_string(v); };
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\">\n";

  if (any) {
    for (int stem = stem_lo; stem <= stem_hi; ++stem)
      out += "<line x1=\"" + num(x_of(stem)) + "\" y1=\"" + num(y_of(0)) + "\" x2=\"" +
             num(x_of(stem)) + "\" y2=\"" + num(y_of(s_hi)) + "\" stroke=\"" +
             L.grid_color + "\"/>\n";
    for (int s = 0; s <= s_hi; ++s)
      out += "<line x1=\"" + num(x_of(stem_lo)) + "\" y1=\"" + num(y_of(s)) + "\" x2=\"" +
             num(x_of(stem_hi)) + "\" y2=\"" + num(y_of(s)) + "\" stroke=\"" +
             L.grid_color + "\"/>\n";

    for (const auto& [st, m] : C.h0) {
      auto [s, t] = st;
      int src_dim = C.dim(s, t);
      int dst_dim = C.dim(s + 1, t + 1);
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (m.get(r, c))
            out += "<line x1=\"" + num(dot_x(t - s, static_cast<int>(c), src_dim)) +
                   "\" y1=\"" + num(y_of(s)) + "\" x2=\"" +
                   num(dot_x(t - s, static_cast<int>(r), dst_dim)) + "\" y2=\"" +
                   num(y_of(s + 1)) + "\" stroke=\"" + L.link_color + "\"/>\n";
    }

    for (const auto& [st, d] : C.dims) {
      auto [s, t] = st;
      for (int k = 0; k < d; ++k)
        out += "<circle cx=\"" + num(dot_x(t - s, k, d)) + "\" cy=\"" + num(y_of(s)) +
               "\" r=\"" + num(L.dot_radius) + "\" fill=\"" + L.dot_color + "\"/>\n";
    }

    for (int stem = stem_lo; stem <= stem_hi; ++stem)
      if (stem % L.tick_every == 0)
        out += "<text x=\"" + num(x_of(stem)) + "\" y=\"" +
               num(y_of(0) + L.font_size + 4) + "\" font-size=\"" + num(L.font_size) +
               "\" text-anchor=\"middle\" fill=\"" + L.text_color + "\">" + num(stem) +
               "</text>\n";
    for (int s = 0; s <= s_hi; ++s)
      if (s % L.tick_every == 0)
        out += "<text x=\"" + num(x_of(stem_lo) - 8) + "\" y=\"" +
               num(y_of(s) + L.font_size / 2 - 1) + "\" font-size=\"" + num(L.font_size) +
               "\" text-anchor=\"end\" fill=\"" + L.text_color + "\">" + num(s) +
               "</text>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace chart
}  // namespace extkit
