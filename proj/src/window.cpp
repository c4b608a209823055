#include "ergo/window.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ergo {

namespace {

constexpr std::int64_t kMaxCells = 50'000'000;

std::vector<std::int64_t> strides_of(const std::vector<std::int64_t>& extents) {
  std::vector<std::int64_t> st(extents.size(), 1);
  for (int i = static_cast<int>(extents.size()) - 2; i >= 0; --i) {
    st[static_cast<std::size_t>(i)] = st[static_cast<std::size_t>(i + 1)] * extents[static_cast<std::size_t>(i + 1)];
  }
  return st;
}

std::int64_t wrap(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

}  // namespace

std::int64_t SubsetWindow::size() const {
  std::int64_t n = 1;
  for (int i = 0; i < d(); ++i) n *= extent(i);
  return n;
}

std::int64_t SubsetWindow::member_count() const {
  return std::count(mask.begin(), mask.end(), static_cast<char>(1));
}

bool SubsetWindow::in_window(const std::vector<std::int64_t>& p) const {
  if (static_cast<int>(p.size()) != d()) return false;
  for (int i = 0; i < d(); ++i) {
    if (p[static_cast<std::size_t>(i)] < lo[static_cast<std::size_t>(i)] ||
        p[static_cast<std::size_t>(i)] >= hi[static_cast<std::size_t>(i)]) {
      return false;
    }
  }
  return true;
}

std::int64_t SubsetWindow::flat(const std::vector<std::int64_t>& p) const {
  if (!in_window(p)) throw ValidationError("point outside the window");
  std::int64_t f = 0;
  for (int i = 0; i < d(); ++i) f = f * extent(i) + (p[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]);
  return f;
}

void SubsetWindow::validate() const {
  if (lo.size() != hi.size() || lo.empty()) throw ValidationError("window needs matching bounds");
  for (int i = 0; i < d(); ++i) {
    if (extent(i) <= 0) throw ValidationError("window axis " + std::to_string(i) + " is empty");
  }
  if (size() > kMaxCells) throw EnumerationError("window has too many cells");
  if (static_cast<std::int64_t>(mask.size()) != size()) {
    throw ValidationError("mask size does not match the window box");
  }
}

SubsetWindow make_window(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi) {
  SubsetWindow w;
  w.lo = std::move(lo);
  w.hi = std::move(hi);
  if (w.lo.size() != w.hi.size() || w.lo.empty()) throw ValidationError("window needs matching bounds");
  for (int i = 0; i < w.d(); ++i) {
    if (w.extent(i) <= 0) throw ValidationError("window axis " + std::to_string(i) + " is empty");
  }
  if (w.size() > kMaxCells) throw EnumerationError("window has too many cells");
  w.mask.assign(static_cast<std::size_t>(w.size()), 0);
  return w;
}

SubsetWindow random_window(Rng& rng, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi,
                           double density) {
  SubsetWindow w = make_window(std::move(lo), std::move(hi));
  for (auto& cell : w.mask) cell = rng.bernoulli(density) ? 1 : 0;
  w.target_density = density;
  return w;
}

double density(const SubsetWindow& e, std::int64_t big_n) {
  e.validate();
  if (big_n < 1) throw ValidationError("density needs N >= 1");
  for (int i = 0; i < e.d(); ++i) {
    if (e.lo[static_cast<std::size_t>(i)] > 0 || e.hi[static_cast<std::size_t>(i)] < big_n) {
      throw ValidationError("Phi_N exceeds the window");
    }
  }
  std::int64_t inside = 0;
  std::vector<std::int64_t> p(static_cast<std::size_t>(e.d()), 0);
  for (;;) {
    if (e.member(p)) ++inside;
    int i = e.d() - 1;
    while (i >= 0 && ++p[static_cast<std::size_t>(i)] == big_n) {
      p[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  double total = 1;
  for (int i = 0; i < e.d(); ++i) total *= static_cast<double>(big_n);
  return static_cast<double>(inside) / total;
}

double density_limsup(const SubsetWindow& e, const std::vector<std::int64_t>& schedule) {
  if (schedule.empty()) throw ValidationError("empty N schedule");
  double best = 0;
  for (std::int64_t n : schedule) best = std::max(best, density(e, n));
  return best;
}

std::vector<std::vector<Element>> cube_points(const GroupModel& group,
                                              const std::vector<Element>& h,
                                              const std::vector<Element>& g,
                                              Orientation orientation) {
  if (h.size() != g.size() || h.empty()) throw ValidationError("h and g need equal dimension");
  const int d = static_cast<int>(h.size());
  std::vector<std::vector<Element>> out;
  out.reserve(static_cast<std::size_t>(1) << d);
  for (int v = 0; v < (1 << d); ++v) {
    std::vector<Element> point(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const bool bit = ((v >> i) & 1) != 0;
      if (orientation == Orientation::left) {
        point[static_cast<std::size_t>(i)] =
            bit ? group.multiply(group.inverse(h[static_cast<std::size_t>(i)]), g[static_cast<std::size_t>(i)])
                : g[static_cast<std::size_t>(i)];
      } else {
        point[static_cast<std::size_t>(i)] =
            bit ? group.multiply(g[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(i)])
                : g[static_cast<std::size_t>(i)];
      }
    }
    out.push_back(std::move(point));
  }
  return out;
}

namespace {

// per-axis displacement of the eps=1 vertex relative to g
std::int64_t vertex_step(std::int64_t h_i, Orientation o) {
  return o == Orientation::left ? -h_i : h_i;
}

CubeCountReport cube_count_brute(const SubsetWindow& e, const std::vector<std::int64_t>& h,
                                 Orientation orientation, BoundaryMode mode) {
  const int d = e.d();
  CubeCountReport report;
  report.method = "brute";

  if (mode == BoundaryMode::open) {
    std::vector<std::int64_t> rlo(static_cast<std::size_t>(d)), rhi(static_cast<std::size_t>(d));
    std::int64_t region = 1;
    for (int i = 0; i < d; ++i) {
      const std::int64_t s = vertex_step(h[static_cast<std::size_t>(i)], orientation);
      rlo[static_cast<std::size_t>(i)] = e.lo[static_cast<std::size_t>(i)] + std::max<std::int64_t>(-s, 0);
      rhi[static_cast<std::size_t>(i)] = e.hi[static_cast<std::size_t>(i)] + std::min<std::int64_t>(-s, 0);
      region *= std::max<std::int64_t>(rhi[static_cast<std::size_t>(i)] - rlo[static_cast<std::size_t>(i)], 0);
    }
    report.region_size = region;
    if (region == 0) return report;

    std::vector<std::int64_t> g = rlo;
    std::vector<std::int64_t> point(static_cast<std::size_t>(d));
    for (;;) {
      bool all = true;
      for (int v = 0; all && v < (1 << d); ++v) {
        for (int i = 0; i < d; ++i) {
          point[static_cast<std::size_t>(i)] =
              g[static_cast<std::size_t>(i)] +
              (((v >> i) & 1) ? vertex_step(h[static_cast<std::size_t>(i)], orientation) : 0);
        }
        all = e.member(point);
      }
      if (all) ++report.count;
      int i = d - 1;
      while (i >= 0 && ++g[static_cast<std::size_t>(i)] == rhi[static_cast<std::size_t>(i)]) {
        g[static_cast<std::size_t>(i)] = rlo[static_cast<std::size_t>(i)];
        --i;
      }
      if (i < 0) break;
    }
  } else {
    report.region_size = e.size();
    std::vector<std::int64_t> rel(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> point(static_cast<std::size_t>(d));
    for (;;) {
      bool all = true;
      for (int v = 0; all && v < (1 << d); ++v) {
        for (int i = 0; i < d; ++i) {
          const std::int64_t step =
              ((v >> i) & 1) ? vertex_step(h[static_cast<std::size_t>(i)], orientation) : 0;
          point[static_cast<std::size_t>(i)] =
              e.lo[static_cast<std::size_t>(i)] + wrap(rel[static_cast<std::size_t>(i)] + step, e.extent(i));
        }
        all = e.member(point);
      }
      if (all) ++report.count;
      int i = d - 1;
      while (i >= 0 && ++rel[static_cast<std::size_t>(i)] == e.extent(i)) {
        rel[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  report.normalized = report.region_size ? static_cast<double>(report.count) / static_cast<double>(report.region_size) : 0.0;
  return report;
}

CubeCountReport cube_count_fast(const SubsetWindow& e, const std::vector<std::int64_t>& h,
                                Orientation orientation, BoundaryMode mode) {
  const int d = e.d();
  CubeCountReport report;
  report.method = "fast";

  std::vector<std::int64_t> extents(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) extents[static_cast<std::size_t>(i)] = e.extent(i);
  const std::vector<std::int64_t> st = strides_of(extents);
  const std::int64_t cells = e.size();

  std::vector<char> cur = e.mask;
  std::vector<char> next(cur.size());
  for (int axis = 0; axis < d; ++axis) {
    const std::int64_t step = vertex_step(h[static_cast<std::size_t>(axis)], orientation);
    const std::int64_t len = extents[static_cast<std::size_t>(axis)];
    const std::int64_t stride = st[static_cast<std::size_t>(axis)];
    for (std::int64_t f = 0; f < cells; ++f) {
      const std::int64_t c = (f / stride) % len;
      char combined = cur[static_cast<std::size_t>(f)];
      if (combined) {
        std::int64_t pc = c + step;
        if (mode == BoundaryMode::toroidal) {
          pc = wrap(pc, len);
          combined = static_cast<char>(combined & cur[static_cast<std::size_t>(f + (pc - c) * stride)]);
        } else if (pc < 0 || pc >= len) {
          combined = 0;
        } else {
          combined = static_cast<char>(combined & cur[static_cast<std::size_t>(f + (pc - c) * stride)]);
        }
      }
      next[static_cast<std::size_t>(f)] = combined;
    }
    std::swap(cur, next);
  }

  if (mode == BoundaryMode::open) {
    std::int64_t region = 1;
    for (int i = 0; i < d; ++i) {
      const std::int64_t s = vertex_step(h[static_cast<std::size_t>(i)], orientation);
      region *= std::max<std::int64_t>(e.extent(i) - std::abs(s), 0);
    }
    report.region_size = region;
  } else {
    report.region_size = cells;
  }
  report.count = std::count(cur.begin(), cur.end(), static_cast<char>(1));
  report.normalized = report.region_size ? static_cast<double>(report.count) / static_cast<double>(report.region_size) : 0.0;
  return report;
}

}  // namespace

CubeCountReport cube_count(const SubsetWindow& e, const std::vector<std::int64_t>& h,
                           const std::string& method, Orientation orientation, BoundaryMode mode) {
  e.validate();
  if (static_cast<int>(h.size()) != e.d()) throw ValidationError("shift dimension mismatch");
  if (method == "brute") return cube_count_brute(e, h, orientation, mode);
  if (method == "fast") return cube_count_fast(e, h, orientation, mode);
  throw ValidationError("unknown cube_count method '" + method + "'");
}

GoodShiftReport good_shift_set(const SubsetWindow& e, double c,
                               const std::vector<std::int64_t>& shift_lo,
                               const std::vector<std::int64_t>& shift_hi, std::int64_t big_n,
                               BoundaryMode mode, Orientation orientation) {
  e.validate();
  const int d = e.d();
  if (static_cast<int>(shift_lo.size()) != d || static_cast<int>(shift_hi.size()) != d) {
    throw ValidationError("shift box dimension mismatch");
  }
  GoodShiftReport report;
  report.delta = density(e, big_n);
  report.threshold = std::pow(report.delta, static_cast<double>(1 << d)) - c;

  std::vector<std::int64_t> dims(static_cast<std::size_t>(d));
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    dims[static_cast<std::size_t>(i)] = shift_hi[static_cast<std::size_t>(i)] - shift_lo[static_cast<std::size_t>(i)];
    if (dims[static_cast<std::size_t>(i)] <= 0) throw ValidationError("shift box is empty");
    total *= dims[static_cast<std::size_t>(i)];
  }
  report.window_size = total;

  std::vector<char> qualifies(static_cast<std::size_t>(total), 0);
  std::vector<std::int64_t> h = shift_lo;
  double sum_normalized = 0;
  for (;;) {
    const CubeCountReport cc = cube_count(e, h, "fast", orientation, mode);
    sum_normalized += cc.normalized;
    if (cc.normalized > report.threshold) {
      std::int64_t flat = 0;
      for (int i = 0; i < d; ++i) {
        flat = flat * dims[static_cast<std::size_t>(i)] + (h[static_cast<std::size_t>(i)] - shift_lo[static_cast<std::size_t>(i)]);
      }
      qualifies[static_cast<std::size_t>(flat)] = 1;
      report.members.push_back(h);
      ++report.qualifying;
    }
    int i = d - 1;
    while (i >= 0 && ++h[static_cast<std::size_t>(i)] == shift_hi[static_cast<std::size_t>(i)]) {
      h[static_cast<std::size_t>(i)] = shift_lo[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) break;
  }
  report.mean_normalized = sum_normalized / static_cast<double>(total);
  report.largest_empty_cube_side = largest_empty_cube_side(qualifies, dims);
  report.empty_run_histogram = ergo::empty_run_histogram(qualifies, dims);
  return report;
}

SyndeticityReport syndeticity_probe(const SubsetWindow& s,
                                    const std::vector<std::vector<std::int64_t>>& probe_boxes) {
  s.validate();
  const int d = s.d();

  // prefix sums over the mask for O(2^d) box queries
  std::vector<std::int64_t> ext(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ext[static_cast<std::size_t>(i)] = s.extent(i) + 1;
  std::vector<std::int64_t> pst = strides_of(ext);
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(std::accumulate(
                                       ext.begin(), ext.end(), std::int64_t{1}, std::multiplies<>())),
                                   0);
  {
    std::vector<std::int64_t> p(static_cast<std::size_t>(d), 0);
    for (;;) {
      // inclusion-exclusion over predecessor corners
      std::int64_t here = 0;
      bool interior = true;
      for (int i = 0; i < d; ++i) interior = interior && p[static_cast<std::size_t>(i)] > 0;
      std::int64_t base = 0;
      for (int i = 0; i < d; ++i) base += p[static_cast<std::size_t>(i)] * pst[static_cast<std::size_t>(i)];
      if (interior) {
        std::vector<std::int64_t> cell(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) cell[static_cast<std::size_t>(i)] = s.lo[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(i)] - 1;
        here = s.member(cell) ? 1 : 0;
        for (int sub = 1; sub < (1 << d); ++sub) {
          std::int64_t at = base;
          for (int i = 0; i < d; ++i) {
            if ((sub >> i) & 1) at -= pst[static_cast<std::size_t>(i)];
          }
          here += (__builtin_popcount(static_cast<unsigned>(sub)) % 2 == 1 ? 1 : -1) * prefix[static_cast<std::size_t>(at)];
        }
      }
      if (interior) prefix[static_cast<std::size_t>(base)] = here;
      int i = d - 1;
      while (i >= 0 && ++p[static_cast<std::size_t>(i)] == ext[static_cast<std::size_t>(i)]) {
        p[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  const auto box_sum = [&](const std::vector<std::int64_t>& from, const std::vector<std::int64_t>& to) {
    // sum over [from, to) in window-relative coordinates
    std::int64_t total = 0;
    for (int corner = 0; corner < (1 << d); ++corner) {
      std::int64_t at = 0;
      int sign = 1;
      for (int i = 0; i < d; ++i) {
        const bool high = ((corner >> i) & 1) == 0;
        at += (high ? to[static_cast<std::size_t>(i)] : from[static_cast<std::size_t>(i)]) * pst[static_cast<std::size_t>(i)];
        if (!high) sign = -sign;
      }
      total += sign * prefix[static_cast<std::size_t>(at)];
    }
    return total;
  };

  SyndeticityReport report;
  for (const auto& box : probe_boxes) {
    if (static_cast<int>(box.size()) != d) throw ValidationError("probe box dimension mismatch");
    ProbePlacementReport pr;
    pr.box = box;
    for (int i = 0; i < d; ++i) {
      if (box[static_cast<std::size_t>(i)] < 1 || box[static_cast<std::size_t>(i)] > s.extent(i)) {
        throw ValidationError("probe box does not fit inside the window");
      }
    }
    std::vector<std::int64_t> origin(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> to(static_cast<std::size_t>(d));
    for (;;) {
      for (int i = 0; i < d; ++i) to[static_cast<std::size_t>(i)] = origin[static_cast<std::size_t>(i)] + box[static_cast<std::size_t>(i)];
      ++pr.placements;
      if (box_sum(origin, to) > 0) ++pr.met;
      int i = d - 1;
      while (i >= 0 &&
             ++origin[static_cast<std::size_t>(i)] > s.extent(i) - box[static_cast<std::size_t>(i)]) {
        origin[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    pr.all_met = pr.met == pr.placements;
    if (pr.all_met && report.minimal_all_met.empty()) report.minimal_all_met = box;
    report.probes.push_back(std::move(pr));
  }
  return report;
}

CorrespondenceResult correspondence_system(const SubsetWindow& e, int radius, std::int64_t big_n) {
  e.validate();
  const int d = e.d();
  if (radius < 0) throw ValidationError("radius must be nonnegative");
  if (big_n < 2) throw ValidationError("correspondence needs N >= 2");
  for (int i = 0; i < d; ++i) {
    if (e.extent(i) < big_n + 2 * (radius + 1)) {
      throw ValidationError("radius too large for the window");
    }
  }
  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= big_n;
  if (cells > 5'000'000) throw EnumerationError("position box has too many points");

  std::vector<std::int64_t> anchor(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) anchor[static_cast<std::size_t>(i)] = e.lo[static_cast<std::size_t>(i)] + radius + 1;

  // offsets of the pattern stencil, row-major over [-r, r]^d
  std::vector<std::vector<std::int64_t>> stencil;
  {
    std::vector<std::int64_t> v(static_cast<std::size_t>(d), -radius);
    for (;;) {
      stencil.push_back(v);
      int i = d - 1;
      while (i >= 0 && ++v[static_cast<std::size_t>(i)] > radius) {
        v[static_cast<std::size_t>(i)] = -radius;
        --i;
      }
      if (i < 0) break;
    }
  }
  const std::size_t center_slot = stencil.size() / 2;

  std::vector<std::int64_t> extents(static_cast<std::size_t>(d), big_n);
  const std::vector<std::int64_t> st = strides_of(extents);
  const auto coords_of = [&](std::int64_t f) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = (f / st[static_cast<std::size_t>(i)]) % big_n;
    return c;
  };

  const auto wrapped_pattern = [&](const std::vector<std::int64_t>& rel) {
    std::vector<char> pat(stencil.size());
    std::vector<std::int64_t> q(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < stencil.size(); ++s) {
      for (int i = 0; i < d; ++i) {
        q[static_cast<std::size_t>(i)] = anchor[static_cast<std::size_t>(i)] +
                                         wrap(rel[static_cast<std::size_t>(i)] + stencil[s][static_cast<std::size_t>(i)], big_n);
      }
      pat[s] = e.member(q) ? 1 : 0;
    }
    return pat;
  };
  const auto true_pattern = [&](const std::vector<std::int64_t>& rel) {
    std::vector<char> pat(stencil.size());
    std::vector<std::int64_t> q(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < stencil.size(); ++s) {
      for (int i = 0; i < d; ++i) {
        q[static_cast<std::size_t>(i)] = anchor[static_cast<std::size_t>(i)] + rel[static_cast<std::size_t>(i)] + stencil[s][static_cast<std::size_t>(i)];
      }
      pat[s] = e.member(q) ? 1 : 0;
    }
    return pat;
  };

  // initial ids from wrapped patterns, in scan order
  std::int64_t falsified = 0;
  std::vector<int> ids(static_cast<std::size_t>(cells));
  std::vector<std::vector<char>> wrapped(static_cast<std::size_t>(cells));
  {
    std::unordered_map<std::string, int> seen;
    for (std::int64_t f = 0; f < cells; ++f) {
      const auto rel = coords_of(f);
      wrapped[static_cast<std::size_t>(f)] = wrapped_pattern(rel);
      if (wrapped[static_cast<std::size_t>(f)] != true_pattern(rel)) ++falsified;
      std::string key(wrapped[static_cast<std::size_t>(f)].begin(), wrapped[static_cast<std::size_t>(f)].end());
      auto [it, fresh] = seen.emplace(key, static_cast<int>(seen.size()));
      ids[static_cast<std::size_t>(f)] = it->second;
    }
  }

  // neighbor flats: position shifted by -e_i and +e_i, wrapped
  std::vector<std::vector<std::int64_t>> back(static_cast<std::size_t>(d)), fwd(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    back[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cells));
    fwd[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cells));
    for (std::int64_t f = 0; f < cells; ++f) {
      const std::int64_t c = (f / st[static_cast<std::size_t>(i)]) % big_n;
      back[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] = f + (wrap(c - 1, big_n) - c) * st[static_cast<std::size_t>(i)];
      fwd[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] = f + (wrap(c + 1, big_n) - c) * st[static_cast<std::size_t>(i)];
    }
  }

  // refine ids until the axis shifts act on classes by well-defined bijections
  for (;;) {
    std::unordered_map<std::string, int> seen;
    std::vector<int> next(static_cast<std::size_t>(cells));
    for (std::int64_t f = 0; f < cells; ++f) {
      std::string key;
      key.reserve(static_cast<std::size_t>(2 * d + 1) * 4);
      const auto push = [&key](int v) {
        key.append(reinterpret_cast<const char*>(&v), sizeof(v));
      };
      push(ids[static_cast<std::size_t>(f)]);
      for (int i = 0; i < d; ++i) {
        push(ids[static_cast<std::size_t>(back[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)])]);
        push(ids[static_cast<std::size_t>(fwd[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)])]);
      }
      auto [it, fresh] = seen.emplace(std::move(key), static_cast<int>(seen.size()));
      next[static_cast<std::size_t>(f)] = it->second;
    }
    const bool stable = static_cast<int>(seen.size()) ==
                        1 + *std::max_element(ids.begin(), ids.end());
    ids = std::move(next);
    if (stable) break;
  }

  const int num_classes = 1 + *std::max_element(ids.begin(), ids.end());

  std::vector<std::int64_t> class_count(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::int64_t> first_of(static_cast<std::size_t>(num_classes), -1);
  for (std::int64_t f = 0; f < cells; ++f) {
    ++class_count[static_cast<std::size_t>(ids[static_cast<std::size_t>(f)])];
    if (first_of[static_cast<std::size_t>(ids[static_cast<std::size_t>(f)])] < 0) first_of[static_cast<std::size_t>(ids[static_cast<std::size_t>(f)])] = f;
  }

  std::vector<std::vector<char>> patterns(static_cast<std::size_t>(num_classes));
  for (int k = 0; k < num_classes; ++k) {
    patterns[static_cast<std::size_t>(k)] = wrapped[static_cast<std::size_t>(first_of[static_cast<std::size_t>(k)])];
  }

  // point names: pattern bits, disambiguated when classes share a pattern
  std::vector<std::string> names(static_cast<std::size_t>(num_classes));
  {
    std::unordered_map<std::string, int> used;
    for (int k = 0; k < num_classes; ++k) {
      std::string bits;
      bits.reserve(patterns[static_cast<std::size_t>(k)].size());
      for (char b : patterns[static_cast<std::size_t>(k)]) bits.push_back(b ? '1' : '0');
      const int n = used[bits]++;
      names[static_cast<std::size_t>(k)] = n == 0 ? bits : bits + "#" + std::to_string(n);
    }
  }

  VectorXd weights(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    weights[k] = static_cast<double>(class_count[static_cast<std::size_t>(k)]) / static_cast<double>(cells);
  }

  std::vector<std::vector<Permutation>> actions(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    Permutation perm(static_cast<std::size_t>(num_classes), -1);
    for (std::int64_t f = 0; f < cells; ++f) {
      const int from = ids[static_cast<std::size_t>(f)];
      const int to = ids[static_cast<std::size_t>(back[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)])];
      if (perm[static_cast<std::size_t>(from)] < 0) {
        perm[static_cast<std::size_t>(from)] = to;
      } else if (perm[static_cast<std::size_t>(from)] != to) {
        throw std::logic_error("pattern refinement left an ill-defined transition");
      }
    }
    actions[static_cast<std::size_t>(i)] = {std::move(perm)};
  }

  std::vector<int> set_a;
  std::int64_t center_in = 0;
  for (int k = 0; k < num_classes; ++k) {
    if (patterns[static_cast<std::size_t>(k)][center_slot]) {
      set_a.push_back(k);
      center_in += class_count[static_cast<std::size_t>(k)];
    }
  }
  VectorXd ia = VectorXd::Zero(num_classes);
  for (int k : set_a) ia[k] = 1.0;

  // transitions whose wrapped image pattern misstates the true shifted pattern
  std::int64_t seams = 0;
  for (std::int64_t f = 0; f < cells; ++f) {
    const auto rel = coords_of(f);
    for (int i = 0; i < d; ++i) {
      std::vector<std::int64_t> shifted = rel;
      shifted[static_cast<std::size_t>(i)] -= 1;
      const auto& img = wrapped[static_cast<std::size_t>(back[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)])];
      if (img != true_pattern(shifted)) ++seams;
    }
  }

  // centers never wrap, so weight_a and density both count E on the position box
  const double center_density = static_cast<double>(center_in) / static_cast<double>(cells);
  CorrespondenceResult result{
      .system = FiniteSystem(std::move(names), std::move(weights), GroupModel::zm(1),
                             std::move(actions)),
      .set_a = std::move(set_a),
      .indicator_a = Observable(std::move(ia), "1_A"),
      .density = center_density,
      .weight_a = center_density,
      .boundary_error = static_cast<double>(falsified) / static_cast<double>(cells),
      .falsified_positions = falsified,
      .seam_transitions = seams,
      .patterns = std::move(patterns),
      .anchor = anchor,
      .radius = radius,
      .big_n = big_n};
  return result;
}

IntersectionReport correspondence_intersection_check(
    const SubsetWindow& e, const CorrespondenceResult& corr,
    const std::vector<std::vector<std::int64_t>>& shifts) {
  e.validate();
  const int d = e.d();
  for (const auto& t : shifts) {
    if (static_cast<int>(t.size()) != d) throw ValidationError("shift dimension mismatch");
    for (int i = 0; i < d; ++i) {
      const std::int64_t low = e.lo[static_cast<std::size_t>(i)] - corr.anchor[static_cast<std::size_t>(i)];
      const std::int64_t high = e.hi[static_cast<std::size_t>(i)] - corr.anchor[static_cast<std::size_t>(i)] - corr.big_n;
      if (t[static_cast<std::size_t>(i)] < low || t[static_cast<std::size_t>(i)] > high) {
        throw ValidationError("shift leaves the window");
      }
    }
  }

  IntersectionReport report;

  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= corr.big_n;
  std::int64_t hits = 0;
  std::vector<std::int64_t> rel(static_cast<std::size_t>(d), 0);
  std::vector<std::int64_t> q(static_cast<std::size_t>(d));
  for (;;) {
    bool all = true;
    for (const auto& t : shifts) {
      for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(i)] = corr.anchor[static_cast<std::size_t>(i)] + rel[static_cast<std::size_t>(i)] + t[static_cast<std::size_t>(i)];
      if (!e.member(q)) {
        all = false;
        break;
      }
    }
    if (all) ++hits;
    int i = d - 1;
    while (i >= 0 && ++rel[static_cast<std::size_t>(i)] == corr.big_n) {
      rel[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  report.lhs_density = static_cast<double>(hits) / static_cast<double>(cells);

  // mu of the intersection of T_t A over the supplied shifts
  const int n = corr.system.size();
  std::vector<Permutation> inv_shift;
  inv_shift.reserve(shifts.size());
  for (const auto& t : shifts) {
    Permutation p = identity_permutation(n);
    for (int i = 0; i < d; ++i) {
      p = compose(permutation_power(corr.system.generator_action(i + 1, 0), -t[static_cast<std::size_t>(i)]), p);
    }
    inv_shift.push_back(std::move(p));
  }
  double mu = 0;
  for (int x = 0; x < n; ++x) {
    bool all = true;
    for (const auto& p : inv_shift) {
      if (corr.indicator_a.values[p[static_cast<std::size_t>(x)]] == 0.0) {
        all = false;
        break;
      }
    }
    if (all) mu += corr.system.weights()[x];
  }
  report.rhs_mu = mu;
  report.diff = report.lhs_density - report.rhs_mu;
  return report;
}

}  // namespace ergo
