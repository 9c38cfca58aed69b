#include "rdc/dse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "rdc/csv.hpp"
#include "rdc/errors.hpp"
#include "rdc/parallel.hpp"

namespace rdc {

namespace {

// Strict weak order on candidate cells: cost, power, latch, dro.
bool better(const DesignChoice& a, const DesignChoice& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.power_w != b.power_w) return a.power_w < b.power_w;
  if (a.latch_wl != b.latch_wl) return a.latch_wl < b.latch_wl;
  return a.dro_wl < b.dro_wl;
}

}  // namespace

void validate(const DesignGrid& grid) {
  const std::size_t nl = grid.latch_wl.size();
  const std::size_t nd = grid.dro_wl.size();
  if (nl == 0 || nd == 0) throw ValidationError("grid", "design grid is empty");
  auto check_shape = [&](const std::vector<std::vector<double>>& m, const char* name) {
    if (m.size() != nl) throw ValidationError(name, "row count differs from latch axis");
    for (const auto& row : m) {
      if (row.size() != nd) throw ValidationError(name, "column count differs from DRO axis");
    }
  };
  check_shape(grid.power_w, "power_w");
  check_shape(grid.freq_hz, "freq_hz");
  check_shape(grid.pn_dbc, "pn_dbc");
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      if (!(grid.power_w[i][j] > 0.0)) throw ValidationError("power_w", "must be positive");
      if (!(grid.freq_hz[i][j] > 0.0)) throw ValidationError("freq_hz", "must be positive");
      if (!std::isfinite(grid.pn_dbc[i][j])) throw ValidationError("pn_dbc", "must be finite");
    }
  }
}

double cost(double pn_dbc, double f_hz, double p_w) {
  if (!(f_hz > 0.0) || !(p_w > 0.0)) throw DomainError("cost needs f > 0 and p > 0");
  // log10(10^(pn/10) / f * p) without forming the tiny linear value.
  return pn_dbc / 10.0 - std::log10(f_hz) + std::log10(p_w);
}

DesignChoice argmin_cost(const DesignGrid& grid, unsigned threads) {
  validate(grid);
  const std::size_t nl = grid.latch_wl.size();
  const std::size_t nd = grid.dro_wl.size();
  // Best per latch row in parallel, then a fixed-order reduction.
  std::vector<DesignChoice> row_best(nl);
  parallel_for(nl, threads, [&](std::size_t i) {
    DesignChoice best;
    for (std::size_t j = 0; j < nd; ++j) {
      DesignChoice c{grid.latch_wl[i], grid.dro_wl[j],
                     cost(grid.pn_dbc[i][j], grid.freq_hz[i][j], grid.power_w[i][j]),
                     grid.power_w[i][j], grid.freq_hz[i][j], grid.pn_dbc[i][j]};
      if (j == 0 || better(c, best)) best = c;
    }
    row_best[i] = best;
  });
  DesignChoice best = row_best.front();
  for (std::size_t i = 1; i < nl; ++i) {
    if (better(row_best[i], best)) best = row_best[i];
  }
  return best;
}

DesignGrid grid_from_model(const std::vector<double>& latch_wl, const std::vector<double>& dro_wl,
                           const SurfaceModel& m) {
  DesignGrid g;
  g.latch_wl = latch_wl;
  g.dro_wl = dro_wl;
  const std::size_t nl = latch_wl.size();
  const std::size_t nd = dro_wl.size();
  if (nl == 0 || nd == 0) throw ValidationError("axes", "sizing axes must be nonempty");
  g.power_w.assign(nl, std::vector<double>(nd));
  g.freq_hz.assign(nl, std::vector<double>(nd));
  g.pn_dbc.assign(nl, std::vector<double>(nd));
  for (std::size_t i = 0; i < nl; ++i) {
    const double l = latch_wl[i];
    for (std::size_t j = 0; j < nd; ++j) {
      const double d = dro_wl[j];
      const double p = m.p0_w * (1.0 + m.latch_gain * l) * (1.0 + m.dro_gain * d);
      const double lr = l / m.latch_knee;
      const double f = m.f0_hz * (1.0 + m.latch_speedup * l) / (1.0 + lr * lr) * d / (d + m.dro_knee) /
                       (1.0 + d / m.dro_load);
      g.power_w[i][j] = p;
      g.freq_hz[i][j] = f;
      g.pn_dbc[i][j] = m.pn_floor_dbc + m.pn_span_db * m.p_sat_w / (p + m.p_sat_w);
    }
  }
  validate(g);
  return g;
}

DesignGrid parse_grid_csv(std::string_view text) {
  CsvData csv;
  try {
    csv = parse_csv(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("grid", e.what());
  }
  std::size_t cl = 0, cd = 0, cp = 0, cf = 0, cn = 0;
  try {
    cl = csv.column("latch_wl");
    cd = csv.column("dro_wl");
    cp = csv.column("power_w");
    cf = csv.column("freq_hz");
    cn = csv.column("pn_dbc");
  } catch (const std::out_of_range& e) {
    throw ValidationError("grid", e.what());
  }
  struct Cell {
    double p, f, pn;
  };
  std::map<std::pair<double, double>, Cell> cells;
  std::vector<double> latch, dro;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    double l = 0, d = 0;
    Cell c{};
    try {
      l = parse_double(row[cl]);
      d = parse_double(row[cd]);
      c = {parse_double(row[cp]), parse_double(row[cf]), parse_double(row[cn])};
    } catch (const std::invalid_argument& e) {
      throw ValidationError("grid row " + std::to_string(r + 1), e.what());
    }
    if (!cells.emplace(std::make_pair(l, d), c).second) {
      throw ValidationError("grid row " + std::to_string(r + 1), "duplicate (latch_wl, dro_wl) cell");
    }
    latch.push_back(l);
    dro.push_back(d);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(latch);
  uniq(dro);
  if (cells.size() != latch.size() * dro.size()) {
    throw ValidationError("grid", "cells do not form a complete latch x DRO grid");
  }
  DesignGrid g;
  g.latch_wl = latch;
  g.dro_wl = dro;
  g.power_w.assign(latch.size(), std::vector<double>(dro.size()));
  g.freq_hz = g.power_w;
  g.pn_dbc = g.power_w;
  for (std::size_t i = 0; i < latch.size(); ++i) {
    for (std::size_t j = 0; j < dro.size(); ++j) {
      const Cell& c = cells.at({latch[i], dro[j]});
      g.power_w[i][j] = c.p;
      g.freq_hz[i][j] = c.f;
      g.pn_dbc[i][j] = c.pn;
    }
  }
  validate(g);
  return g;
}

std::string grid_to_csv(const DesignGrid& grid) {
  CsvWriter w({"latch_wl", "dro_wl", "power_w", "freq_hz", "pn_dbc"});
  for (std::size_t i = 0; i < grid.latch_wl.size(); ++i) {
    for (std::size_t j = 0; j < grid.dro_wl.size(); ++j) {
      w.row({format_number(grid.latch_wl[i]), format_number(grid.dro_wl[j]),
             format_number(grid.power_w[i][j]), format_number(grid.freq_hz[i][j]),
             format_number(grid.pn_dbc[i][j])});
    }
  }
  return w.str();
}

std::string choice_to_csv(const DesignChoice& c) {
  CsvWriter w({"latch_wl", "dro_wl", "power_w", "freq_hz", "pn_dbc", "cost"});
  w.row({format_number(c.latch_wl), format_number(c.dro_wl), format_number(c.power_w),
         format_number(c.freq_hz), format_number(c.pn_dbc), format_number(c.cost)});
  return w.str();
}

}  // namespace rdc
