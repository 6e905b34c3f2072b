#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/matching.hpp"
#include "core/quantize.hpp"
#include "core/rng.hpp"
#include "core/stripe.hpp"
#include "core/trim1d.hpp"
#include "core/wasserstein1d.hpp"

namespace otrim {

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::trim1d_cost: return "trim1d_cost";
    case Statistic::untrimmed_1d_cost: return "untrimmed_1d_cost";
    case Statistic::partial_match: return "partial_match";
    case Statistic::untrimmed_match: return "untrimmed_match";
    case Statistic::stripe_bound: return "stripe_bound";
    case Statistic::quantization: return "quantization";
  }
  throw error(errc::internal, "unknown statistic");
}

Statistic statistic_from_name(const std::string& name) {
  for (Statistic s : {Statistic::trim1d_cost, Statistic::untrimmed_1d_cost,
                      Statistic::partial_match, Statistic::untrimmed_match,
                      Statistic::stripe_bound, Statistic::quantization})
    if (name == statistic_name(s)) return s;
  throw error(errc::usage, "unknown statistic: " + name);
}

Sample sample_uniform(std::size_t n, std::uint32_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw error(errc::usage, "need n >= 1 and d >= 1");
  std::vector<double> coords(n * d);
  for (std::size_t k = 0; k < coords.size(); ++k)
    coords[k] = rng::to_unit(rng::at(seed, k));
  return Sample::make(d, std::move(coords), seed);
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep) {
  return rng::substream(master_seed, n, rep);
}

namespace {

void validate_config(const ExperimentConfig& c) {
  if (c.n_grid.empty()) throw error(errc::usage, "empty n grid");
  for (std::size_t k = 1; k < c.n_grid.size(); ++k)
    if (c.n_grid[k] <= c.n_grid[k - 1])
      throw error(errc::usage, "n grid must be strictly increasing");
  if (c.reps < 1) throw error(errc::usage, "reps must be >= 1");
  if (!(c.p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw error(errc::usage, "alpha in [0,1)");
  const bool needs_1d = c.statistic == Statistic::trim1d_cost ||
                        c.statistic == Statistic::untrimmed_1d_cost;
  if (needs_1d && c.d != 1)
    throw error(errc::usage, "1-d statistic requires d = 1");
  if (c.statistic == Statistic::stripe_bound && c.d < 2)
    throw error(errc::usage, "stripe statistic requires d >= 2");
  if ((c.statistic == Statistic::trim1d_cost ||
       c.statistic == Statistic::stripe_bound) &&
      c.alpha == 0.0)
    throw error(errc::usage, "trimmed statistic requires alpha > 0");
}

// One replication; `excluded` comes back true for infeasible stripe plans.
double evaluate_statistic(const ExperimentConfig& c, std::size_t n, std::uint64_t seed,
                          bool& excluded) {
  excluded = false;
  switch (c.statistic) {
    case Statistic::trim1d_cost: {
      const Sample s = sample_uniform(n, 1, rng::substream(seed, 1));
      const SortedView v = sorted_view_1d(s);
      return solve_trim1d(v.x, TrimParams(c.alpha, c.p)).cost;
    }
    case Statistic::untrimmed_1d_cost: {
      const Sample s = sample_uniform(n, 1, rng::substream(seed, 1));
      const SortedView v = sorted_view_1d(s);
      return w_p_empirical_to_uniform(v.x, c.p);
    }
    case Statistic::partial_match:
    case Statistic::untrimmed_match: {
      MatchingProblem pr;
      pr.x = sample_uniform(n, c.d, rng::substream(seed, 1));
      pr.y = sample_uniform(n, c.d, rng::substream(seed, 2));
      pr.p = c.p;
      pr.alpha = c.statistic == Statistic::partial_match ? c.alpha : 0.0;
      return solve_partial_matching(pr).cost;
    }
    case Statistic::stripe_bound: {
      const Sample s = sample_uniform(n, c.d, rng::substream(seed, 1));
      const TrimParams params(c.alpha, c.p);
      const StripePlan plan = c.d == 2 ? build_stripe_plan(s, params)
                                       : build_stripe_plan_recursive(s, params);
      if (!plan.feasible()) {
        excluded = true;
        return 0.0;
      }
      return plan.root.upper;
    }
    case Statistic::quantization: {
      const Sample s = sample_uniform(n, c.d, rng::substream(seed, 1));
      if (c.d == 1) {
        const SortedView v = sorted_view_1d(s);
        return quantization_cost_1d(v.x, c.p).cost;
      }
      return quantization_cost_mc(s, c.p, c.mc_draws, rng::substream(seed, 3)).cost;
    }
  }
  throw error(errc::internal, "unknown statistic");
}

}  // namespace

std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw error(errc::usage, "slope fit needs >= 3 points");
  const std::size_t k = pts.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(pts[i].second > 0.0))
      throw error(errc::usage, "slope fit needs positive means");
    lx[i] = std::log(pts[i].first);
    ly[i] = std::log(pts[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = ly[i] - intercept - slope * lx[i];
    rss += e * e;
  }
  const double se = k > 2 ? std::sqrt(rss / static_cast<double>(k - 2) / sxx) : 0.0;
  return {slope, se};
}

RateTable run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  RateTable table;
  table.config = config;
  const std::size_t tasks = config.n_grid.size() * config.reps;
  table.rows.resize(tasks);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks || failed.load()) return;
      const std::size_t gi = t / config.reps;
      const std::size_t rep = t % config.reps;
      const std::size_t n = config.n_grid[gi];
      RateRow& row = table.rows[t];
      row.n = n;
      row.rep = rep;
      try {
        row.value = evaluate_statistic(
            config, n, replication_seed(config.master_seed, n, rep), row.excluded);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lk(failure_mutex);
        failure = e.what();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw error(errc::internal, "replication failed: " + failure);

  std::vector<std::pair<double, double>> means;
  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    RateSummary s;
    s.n = config.n_grid[gi];
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      const RateRow& row = table.rows[gi * config.reps + rep];
      if (row.excluded) continue;
      sum += row.value;
      sum2 += row.value * row.value;
      ++s.n_included;
    }
    if (s.n_included > 0) {
      s.mean = sum / static_cast<double>(s.n_included);
      const double var =
          std::max(0.0, sum2 / static_cast<double>(s.n_included) - s.mean * s.mean);
      s.std_error = s.n_included > 1
                        ? std::sqrt(var / static_cast<double>(s.n_included - 1))
                        : 0.0;
      means.emplace_back(static_cast<double>(s.n), s.mean);
    }
    table.summary.push_back(s);
  }
  const auto [slope, se] = fit_loglog_slope(means);
  table.slope = slope;
  table.slope_se = se;
  return table;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_prefix(const ExperimentConfig& c) {
  std::ostringstream os;
  os << statistic_name(c.statistic) << ',' << c.d << ',' << fmt17(c.p) << ','
     << fmt17(c.alpha);
  return os.str();
}

// Minimal self-contained log-log scatter with the fitted line.
std::string render_svg(const RateTable& t) {
  constexpr int W = 800, H = 600, ML = 70, MR = 20, MT = 20, MB = 50;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : t.summary)
    if (s.n_included > 0 && s.mean > 0.0)
      pts.emplace_back(std::log10(static_cast<double>(s.n)), std::log10(s.mean));
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto [x, y] : pts) {
    x0 = std::min(x0, x); x1 = std::max(x1, x);
    y0 = std::min(y0, y); y1 = std::max(y1, y);
  }
  if (pts.empty()) { x0 = y0 = 0.0; x1 = y1 = 1.0; }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double xpad = 0.05 * (x1 - x0), ypad = 0.08 * (y1 - y0);
  x0 -= xpad; x1 += xpad; y0 -= ypad; y1 += ypad;
  auto px = [&](double x) { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
     << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
     << "\" height=\"" << (H - MT - MB)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // Decade ticks.
  for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
    const double x = px(e);
    os << "<line x1=\"" << fmt17(x) << "\" y1=\"" << (H - MB) << "\" x2=\"" << fmt17(x)
       << "\" y2=\"" << (H - MB + 6) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt17(x) << "\" y=\"" << (H - MB + 22)
       << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">1e"
       << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(y0)); e <= static_cast<int>(std::floor(y1)); ++e) {
    const double y = py(e);
    os << "<line x1=\"" << (ML - 6) << "\" y1=\"" << fmt17(y) << "\" x2=\"" << ML
       << "\" y2=\"" << fmt17(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << (ML - 10) << "\" y=\"" << fmt17(y + 4)
       << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">1e" << e
       << "</text>\n";
  }
  os << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 10)
     << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">n</text>\n"
     << "<text x=\"18\" y=\"" << (MT + (H - MT - MB) / 2)
     << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 18 "
     << (MT + (H - MT - MB) / 2) << ")\">mean "
     << statistic_name(t.config.statistic) << "</text>\n";
  // Fitted line through the mean point with the fitted slope (base-10 logs
  // share the slope of natural logs).
  if (pts.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) { mx += x; my += y; }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    const double xa = x0 + xpad, xb = x1 - xpad;
    const double ya = my + t.slope * (xa - mx), yb = my + t.slope * (xb - mx);
    os << "<line x1=\"" << fmt17(px(xa)) << "\" y1=\"" << fmt17(py(ya)) << "\" x2=\""
       << fmt17(px(xb)) << "\" y2=\"" << fmt17(py(yb))
       << "\" stroke=\"#c02020\" stroke-width=\"1.5\"/>\n";
  }
  for (auto [x, y] : pts)
    os << "<circle cx=\"" << fmt17(px(x)) << "\" cy=\"" << fmt17(py(y))
       << "\" r=\"4\" fill=\"#2050c0\"/>\n";
  os << "<text x=\"" << (W - MR - 8) << "\" y=\"" << (MT + 18)
     << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"end\">slope "
     << fmt17(t.slope) << " (se " << fmt17(t.slope_se) << ")</text>\n</svg>\n";
  return os.str();
}

}  // namespace

void emit_report(const RateTable& table, const std::string& dir) {
  if (table.rows.empty())
    throw error(errc::usage, "refusing to emit an empty report");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw error(errc::io, "cannot create directory: " + dir);

  const std::string prefix = config_prefix(table.config);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw error(errc::io, "cannot open for writing: " + dir + "/" + name);
    return out;
  };

  {
    std::ofstream out = open("rows.csv");
    out << "statistic,d,p,alpha,n,rep,value,excluded\n";
    for (const auto& r : table.rows)
      out << prefix << ',' << r.n << ',' << r.rep << ',' << fmt17(r.value) << ','
          << (r.excluded ? 1 : 0) << '\n';
    if (!out) throw error(errc::io, "write failed: rows.csv");
  }
  {
    std::ofstream out = open("summary.csv");
    out << "statistic,d,p,alpha,n,mean,stderr,n_included\n";
    for (const auto& s : table.summary)
      out << prefix << ',' << s.n << ',' << fmt17(s.mean) << ',' << fmt17(s.std_error)
          << ',' << s.n_included << '\n';
    if (!out) throw error(errc::io, "write failed: summary.csv");
  }
  {
    std::ofstream out = open("slope.csv");
    out << "statistic,d,p,alpha,slope,slope_se\n";
    out << prefix << ',' << fmt17(table.slope) << ',' << fmt17(table.slope_se) << '\n';
    if (!out) throw error(errc::io, "write failed: slope.csv");
  }
  {
    std::ofstream out = open("plot.svg");
    out << render_svg(table);
    if (!out) throw error(errc::io, "write failed: plot.svg");
  }
}

}  // namespace otrim
