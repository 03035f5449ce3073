#include "dsmark/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "dsmark/error.hpp"
#include "dsmark/kernels.hpp"
#include "dsmark/random.hpp"

namespace dsmark {

namespace {

constexpr std::uint64_t kTrialStream = 1;
constexpr std::uint64_t kPermutationStream = 2;
constexpr std::uint64_t kWatermarkStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

/// First `count` entries of a Fisher-Yates shuffle of [0, size), computed
/// with a sparse swap table so the cost is O(count) regardless of size.
std::vector<std::uint32_t> random_selection(Rng& rng, std::size_t size, std::size_t count) {
  std::vector<std::uint32_t> out(count);
  std::unordered_map<std::uint32_t, std::uint32_t> moved;
  moved.reserve(2 * count);
  const auto value_at = [&](std::uint32_t i) {
    const auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::uint32_t>(i + rng.below(size - i));
    const std::uint32_t vi = value_at(static_cast<std::uint32_t>(i));
    const std::uint32_t vj = value_at(j);
    out[i] = vj;
    moved[j] = vi;
  }
  return out;
}

struct Received {
  std::vector<double> coef;
  std::vector<double> dc;
};

/// Everything one worker thread reuses across trials.
struct Workspace {
  std::vector<double> x;
  std::vector<double> m;
  std::vector<double> delta;
  Received h0;
  Received plus;
  Received minus;
  std::vector<double> det_mask;
  std::vector<Block> noise;
};

class Channel {
 public:
  Channel(const HostModel& host, const TrialConfig& cfg) : host_(host), cfg_(cfg) {
    if (cfg.attack.kind == AttackKind::Jpeg) {
      steps_ = jpeg_quant_steps(cfg.attack.quality, cfg.quant_base);
      const std::size_t k_count = host.spectrum.blocks.size();
      jpeg_dc_.resize(k_count);
      double sum = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        jpeg_dc_[k] = jpeg_receive(k, 0.0).first;
        sum += jpeg_dc_[k];
      }
      jpeg_dc_sum_ = sum;
    }
  }

  /// Received (DC, target) of block k after adding `delta` to its target
  /// coefficient and passing it through the attack.
  /// `noise` is the block's pixel noise for AttackKind::Awgn, or null to
  /// draw it from `noise_seed`.
  std::pair<double, double> receive(std::size_t k, double delta, std::uint64_t noise_seed,
                                    const Block* noise = nullptr) const {
    const int u = host_.natural_index;
    switch (cfg_.attack.kind) {
      case AttackKind::None: {
        if (!host_.image_backed()) return {0.0, host_.x[k] + delta};
        const Block& b = host_.spectrum.blocks[k];
        return {u == 0 ? b[0] + delta : b[0], b[u] + delta};
      }
      case AttackKind::AwgnCoefficients: {
        BlockRng rng(awgn_block_seed(noise_seed, k));
        double noise_dc = 0.0;
        double noise_u = 0.0;
        for (int i = 0; i <= u; ++i) {
          const double z = cfg_.attack.noise_sigma * rng.normal();
          if (i == 0) noise_dc = z;
          if (i == u) noise_u = z;
        }
        if (!host_.image_backed()) return {0.0, host_.x[k] + delta + noise_u};
        const Block& b = host_.spectrum.blocks[k];
        return {(u == 0 ? b[0] + delta : b[0]) + noise_dc, b[u] + delta + noise_u};
      }
      case AttackKind::Awgn: {
        const Block& basis = dct_basis(u);
        Block pix;
        const Block& src = host_.pixels[k];
        for (int i = 0; i < 64; ++i) pix[i] = src[i] + delta * basis[i];
        Block drawn;
        if (noise == nullptr) {
          awgn_noise_block(cfg_.attack.noise_sigma, awgn_block_seed(noise_seed, k), drawn);
          noise = &drawn;
        }
        Block noisy;
        for (int i = 0; i < 64; ++i) noisy[i] = quantize_pixel(pix[i] + (*noise)[i]);
        Block c;
        kernels::active().dct8x8(noisy.data(), c.data());
        return {c[0], c[u]};
      }
      case AttackKind::Jpeg:
        return jpeg_receive(k, delta);
    }
    return {0.0, 0.0};
  }

  /// Sum of received DC terms over all blocks of an unwatermarked image.
  double h0_dc_sum(std::uint64_t noise_seed) const {
    switch (cfg_.attack.kind) {
      case AttackKind::Jpeg:
        return jpeg_dc_sum_;
      case AttackKind::None: {
        double s = 0.0;
        for (const auto& b : host_.spectrum.blocks) s += b[0];
        return s;
      }
      default: {
        double s = 0.0;
        for (std::size_t k = 0; k < host_.spectrum.blocks.size(); ++k) s += receive(k, 0.0, noise_seed).first;
        return s;
      }
    }
  }

 private:
  std::pair<double, double> jpeg_receive(std::size_t k, double delta) const {
    const int u = host_.natural_index;
    Block coeffs = host_.spectrum.blocks[k];
    coeffs[u] += delta;
    Block pix;
    jpeg_block(coeffs, steps_, pix);
    Block c;
    kernels::active().dct8x8(pix.data(), c.data());
    return {c[0], c[u]};
  }

  const HostModel& host_;
  const TrialConfig& cfg_;
  QuantTable steps_{};
  std::vector<double> jpeg_dc_;
  double jpeg_dc_sum_ = 0.0;
};

bool uses(std::span<const Scheme> schemes, Scheme s) { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }

}  // namespace

void TrialConfig::validate() const {
  if (trials < 1) throw Error("trials must be at least 1");
  if (n < 2 || n % 2 != 0) throw Error("N must be even and at least 2");
  if (!(a >= 0.0)) throw Error("embedding strength must be non-negative");
  if (zigzag_index < 1 || zigzag_index > 64) throw Error("zigzag index outside [1, 64]");
  if (threads < 0) throw Error("threads must be non-negative");
  masks.validate();
  attack.validate();
  for (double p : pfa_grid) {
    if (!(p > 0.0 && p < 1.0)) throw Error("false-alarm targets must lie in (0, 1)");
  }
}

std::optional<double> RocCurve::miss_at(double p_fa) const {
  for (const auto& p : points) {
    if (std::abs(p.p_fa - p_fa) <= 1e-12 * p_fa) return p.p_m;
  }
  return std::nullopt;
}

HostModel host_from_image(const Image& img, std::string label, const TrialConfig& cfg) {
  HostModel h;
  h.label = std::move(label);
  h.natural_index = zigzag_to_natural(cfg.zigzag_index);
  h.spectrum = block_dct(img);
  h.x = zigzag_extract(h.spectrum, cfg.zigzag_index);
  h.m = mask_vector(h.spectrum, cfg.zigzag_index, cfg.masks, cfg.table);
  h.ggd = fit_ggd(h.x);
  h.cauchy = fit_cauchy(h.x);
  h.pixels.resize(h.spectrum.blocks.size());
  for (int by = 0; by < img.blocks_y(); ++by)
    for (int bx = 0; bx < img.blocks_x(); ++bx) {
      Block& b = h.pixels[static_cast<std::size_t>(by * img.blocks_x() + bx)];
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) b[y * 8 + x] = img.at(bx * 8 + x, by * 8 + y);
    }
  return h;
}

HostModel host_from_vectors(HostVector x, MaskVector m, std::string label) {
  if (x.size() != m.size()) throw Error("host and mask vectors differ in length");
  for (double v : m) {
    if (!(v > 0.0)) throw Error("mask thresholds must be positive");
  }
  HostModel h;
  h.label = std::move(label);
  h.x = std::move(x);
  h.m = std::move(m);
  h.ggd = fit_ggd(h.x);
  h.cauchy = fit_cauchy(h.x);
  return h;
}

std::vector<StatisticPopulations> simulate(const HostModel& host, const TrialConfig& cfg,
                                           std::span<const Scheme> schemes) {
  cfg.validate();
  const std::size_t k_count = host.x.size();
  const auto n = static_cast<std::size_t>(cfg.n);
  if (n > k_count) {
    throw Error("N = " + std::to_string(n) + " exceeds the " + std::to_string(k_count) + " available coefficients");
  }
  if (!host.image_backed() && cfg.attack.kind != AttackKind::None && cfg.attack.kind != AttackKind::AwgnCoefficients) {
    throw Error("image-domain attacks need an image-backed host");
  }
  const bool blind = cfg.blind_masks && host.image_backed();
  const bool need_plus = uses(schemes, Scheme::AssCor) || uses(schemes, Scheme::Hernandez) ||
                         uses(schemes, Scheme::Briassouli) || uses(schemes, Scheme::DsAss) ||
                         uses(schemes, Scheme::DsCauchy);
  const bool need_blind_masks = blind && uses(schemes, Scheme::Hernandez);
  const int u = host.natural_index;
  const double gamma = host.cauchy.gamma;
  const double c = host.ggd.c;
  const auto& kern = kernels::active();

  std::vector<StatisticPopulations> out(schemes.size());
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    out[s].scheme = schemes[s];
    out[s].h0.assign(static_cast<std::size_t>(cfg.trials), 0.0);
    out[s].h1.assign(static_cast<std::size_t>(cfg.trials), 0.0);
  }

  const Channel channel(host, cfg);

  const auto run_trial = [&](int t, Workspace& ws) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, kTrialStream, static_cast<std::uint64_t>(t));
    Rng perm_rng(derive_seed(trial_seed, kPermutationStream));
    const std::vector<std::uint32_t> sel = random_selection(perm_rng, k_count, n);
    const Watermark w = generate_watermark(cfg.n, derive_seed(trial_seed, kWatermarkStream));
    const std::uint64_t noise_seed = derive_seed(trial_seed, kNoiseStream);
    const double* wv = w.values().data();

    ws.x.resize(n);
    ws.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ws.x[i] = host.x[sel[i]];
      ws.m[i] = host.m[sel[i]];
    }
    const double xbar = kern.sum_products(ws.x.data(), wv, n) / static_cast<double>(n);
    const double xbar_c = kern.sum_cauchy_terms(ws.x.data(), wv, gamma * gamma, n) / static_cast<double>(n);
    const double ds_sign = xbar > 0.0 ? 1.0 : -1.0;
    const double dsc_sign = xbar_c > 0.0 ? 1.0 : -1.0;
    const bool need_minus = (uses(schemes, Scheme::DsAss) && ds_sign < 0) || (uses(schemes, Scheme::DsCauchy) && dsc_sign < 0);

    const bool pixel_noise = cfg.attack.kind == AttackKind::Awgn;
    if (pixel_noise) {
      // Shared by H0 and both embedding signs.
      ws.noise.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        awgn_noise_block(cfg.attack.noise_sigma, awgn_block_seed(noise_seed, sel[i]), ws.noise[i]);
      }
    }
    const auto fill = [&](Received& r, double sign) {
      r.coef.resize(n);
      r.dc.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = sign * cfg.a * ws.m[i] * wv[i];
        const auto [dc, coef] = channel.receive(sel[i], delta, noise_seed, pixel_noise ? &ws.noise[i] : nullptr);
        r.dc[i] = dc;
        r.coef[i] = coef;
      }
    };
    fill(ws.h0, 0.0);
    if (need_plus) fill(ws.plus, 1.0);
    if (need_minus) fill(ws.minus, -1.0);

    double h0_dc_total = 0.0;
    double h0_sel_dc = 0.0;
    if (need_blind_masks) {
      h0_dc_total = channel.h0_dc_sum(noise_seed);
      for (double d : ws.h0.dc) h0_sel_dc += d;
    }
    // Detector-side masks for the GGD statistic.
    const auto detector_masks = [&](const Received& r) -> const std::vector<double>& {
      if (!need_blind_masks) return ws.m;
      double sel_dc = 0.0;
      for (double d : r.dc) sel_dc += d;
      const double reference = (h0_dc_total - h0_sel_dc + sel_dc) / static_cast<double>(k_count);
      ws.det_mask.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        ws.det_mask[i] = coefficient_threshold(cfg.table, cfg.masks, u, r.dc[i], reference, r.coef[i]);
      }
      return ws.det_mask;
    };
    const auto correlate = [&](const Received& r) { return kern.sum_products(r.coef.data(), wv, n) / static_cast<double>(n); };
    const auto cauchy = [&](const Received& r) {
      return kern.sum_cauchy_terms(r.coef.data(), wv, gamma * gamma, n) / static_cast<double>(n);
    };
    const auto ggd = [&](const Received& r) { return detect_ggd(r.coef, w, cfg.a, detector_masks(r), c); };

    const std::size_t ti = static_cast<std::size_t>(t);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      auto& pop = out[s];
      switch (schemes[s]) {
        case Scheme::AssCor:
          pop.h0[ti] = correlate(ws.h0);
          pop.h1[ti] = correlate(ws.plus);
          break;
        case Scheme::Hernandez:
          pop.h0[ti] = ggd(ws.h0);
          pop.h1[ti] = ggd(ws.plus);
          break;
        case Scheme::Briassouli:
          pop.h0[ti] = cauchy(ws.h0);
          pop.h1[ti] = cauchy(ws.plus);
          break;
        case Scheme::DsAss:
          pop.h0[ti] = correlate(ws.h0);
          pop.h1[ti] = correlate(ds_sign > 0 ? ws.plus : ws.minus);
          break;
        case Scheme::DsCauchy:
          pop.h0[ti] = cauchy(ws.h0);
          pop.h1[ti] = cauchy(dsc_sign > 0 ? ws.plus : ws.minus);
          break;
      }
    }
  };

  int threads = cfg.threads == 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : cfg.threads;
  threads = std::min(threads, cfg.trials);
  if (threads <= 1) {
    Workspace ws;
    for (int t = 0; t < cfg.trials; ++t) run_trial(t, ws);
    return out;
  }
  // Each worker owns a contiguous range of trial indices and writes only
  // its own slots, so the result does not depend on scheduling.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int th = 0; th < threads; ++th) {
    const int begin = static_cast<int>(static_cast<long long>(cfg.trials) * th / threads);
    const int end = static_cast<int>(static_cast<long long>(cfg.trials) * (th + 1) / threads);
    pool.emplace_back([&, th, begin, end] {
      try {
        Workspace ws;
        for (int t = begin; t < end; ++t) run_trial(t, ws);
      } catch (...) {
        errors[static_cast<std::size_t>(th)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> default_pfa_grid(int trials) {
  static constexpr double kGrid[] = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5};
  std::vector<double> out;
  for (double p : kGrid) {
    if (p * trials >= 10.0 - 1e-9) out.push_back(p);
  }
  return out;
}

double empirical_threshold(std::span<const double> h0, double p_fa, Rule rule) {
  if (h0.empty()) throw Error("empirical_threshold: empty H0 population");
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw Error("empirical_threshold: p_fa must lie in (0, 1)");
  const std::size_t n = h0.size();
  const auto exceed = static_cast<std::size_t>(std::floor(p_fa * static_cast<double>(n) + 1e-9));
  if (exceed < 1) {
    throw Error("p_fa = " + format_double(p_fa) + " is below the 1/" + std::to_string(n) +
                " resolution of the H0 population; run more trials");
  }
  std::vector<double> v(h0.begin(), h0.end());
  if (rule == Rule::DoubleSided) {
    for (double& x : v) x = std::abs(x);
  }
  const std::size_t idx = n - 1 - exceed;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

double empirical_miss_rate(std::span<const double> h1, double psi, Rule rule) {
  if (h1.empty()) throw Error("empirical_miss_rate: empty H1 population");
  std::size_t misses = 0;
  for (double l : h1) {
    if (decide(l, rule == Rule::DoubleSided ? std::max(psi, 0.0) : psi, rule).decision == Hypothesis::H0) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(h1.size());
}

RocCurve roc_from_populations(const StatisticPopulations& pop, const TrialConfig& cfg, std::string image_label,
                              std::span<const double> pfa_grid) {
  RocCurve curve;
  curve.scheme = std::string(to_string(pop.scheme));
  curve.image = std::move(image_label);
  curve.attack = cfg.attack.label();
  curve.mask_mode = std::string(to_string(cfg.masks.mode));
  curve.a = cfg.a;
  curve.n = cfg.n;
  curve.trials = static_cast<int>(pop.h0.size());
  std::vector<double> grid(pfa_grid.begin(), pfa_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const Rule rule = rule_for(pop.scheme);
  for (double p : grid) {
    const double psi = empirical_threshold(pop.h0, p, rule);
    curve.points.push_back({p, empirical_miss_rate(pop.h1, psi, rule)});
  }
  return curve;
}

std::vector<RocCurve> run_roc(const HostModel& host, const TrialConfig& cfg, std::span<const Scheme> schemes) {
  const std::vector<double> grid = cfg.pfa_grid.empty() ? default_pfa_grid(cfg.trials) : cfg.pfa_grid;
  for (double p : grid) {
    if (p * cfg.trials < 1.0 - 1e-9) {
      throw Error("p_fa = " + format_double(p) + " cannot be resolved with " + std::to_string(cfg.trials) +
                  " trials; run more trials");
    }
  }
  const auto pops = simulate(host, cfg, schemes);
  std::vector<RocCurve> curves;
  curves.reserve(pops.size());
  for (const auto& pop : pops) curves.push_back(roc_from_populations(pop, cfg, host.label, grid));
  return curves;
}

std::vector<RocCurve> run_roc(const TrialConfig& cfg, std::span<const Scheme> schemes) {
  cfg.validate();
  const Image img = load_pgm(cfg.image);
  const HostModel host = host_from_image(img, cfg.image.stem().string(), cfg);
  return run_roc(host, cfg, schemes);
}

RocCurve run_roc(const TrialConfig& cfg) {
  const Scheme one[] = {cfg.scheme};
  return run_roc(cfg, std::span<const Scheme>(one)).front();
}

ClosedFormReport validate_closed_form(int n, double k, double sigma, std::span<const double> pfa_grid, int trials,
                                      std::uint64_t seed, const MissFormula& formula) {
  if (n < 2) throw Error("validate_closed_form: N must be at least 2");
  if (n % 2 != 0) throw Error("validate_closed_form: N must be even");
  if (!(k >= 0.0) || !(sigma > 0.0)) throw Error("validate_closed_form: need k >= 0 and sigma > 0");
  if (trials < 1) throw Error("validate_closed_form: trials must be positive");
  ClosedFormReport rep;
  rep.n = n;
  rep.k = k;
  rep.sigma = sigma;
  rep.trials = trials;

  // Full chain per trial: Gaussian host, random key, uniform masks m = k
  // at a = 1, DS-ASS embedding and the correlator.
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> h0(static_cast<std::size_t>(trials));
  std::vector<double> h1(static_cast<std::size_t>(trials));
  const std::vector<double> masks(un, k > 0.0 ? k : 1.0);
  const double a = k > 0.0 ? 1.0 : 0.0;
  std::vector<double> x(un);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, kTrialStream, static_cast<std::uint64_t>(t)));
    for (double& v : x) v = sigma * rng.normal();
    const Watermark w = generate_watermark(n, derive_seed(seed, kWatermarkStream, static_cast<std::uint64_t>(t)));
    h0[static_cast<std::size_t>(t)] = detect_correlator(x, w);
    h1[static_cast<std::size_t>(t)] = detect_correlator(embed_dsass(x, w, a, masks), w);
  }
  const double scale = sigma / std::sqrt(static_cast<double>(n));

  rep.pass = true;
  for (double p : pfa_grid) {
    ClosedFormPoint pt;
    pt.p_fa = p;
    pt.predicted_pm = formula(p, k, n, sigma);
    const double psi = scale * q_inverse(p / 2.0);
    std::size_t misses = 0;
    std::size_t alarms = 0;
    for (std::size_t t = 0; t < h0.size(); ++t) {
      if (decide(h1[t], psi, Rule::DoubleSided).decision == Hypothesis::H0) ++misses;
      if (decide(h0[t], psi, Rule::DoubleSided).decision == Hypothesis::H1) ++alarms;
    }
    const double t = static_cast<double>(trials);
    pt.empirical_pm = static_cast<double>(misses) / t;
    pt.empirical_pfa = static_cast<double>(alarms) / t;
    const double pm_clamped = std::clamp(pt.predicted_pm, 0.0, 1.0);
    pt.pm_tolerance = 3.0 * std::sqrt(pm_clamped * (1.0 - pm_clamped) / t);
    pt.pfa_tolerance = 3.0 * std::sqrt(p * (1.0 - p) / t);
    const double dev = std::abs(pt.empirical_pm - pt.predicted_pm);
    pt.pass = dev <= pt.pm_tolerance && std::abs(pt.empirical_pfa - p) <= pt.pfa_tolerance;
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
    rep.pass = rep.pass && pt.pass;
    rep.points.push_back(pt);
  }
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const RocCurve> curves) {
  out << "scheme,image,attack,mask_mode,a,N,trials,p_fa,p_m\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << c.scheme << ',' << c.image << ',' << c.attack << ',' << c.mask_mode << ',' << format_double(c.a) << ','
          << c.n << ',' << c.trials << ',' << format_double(p.p_fa) << ',' << format_double(p.p_m) << '\n';
    }
  }
}

void export_csv(std::span<const RocCurve> curves, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(out, curves);
  if (!out) throw Error("write failed for " + path.string());
}

void export_csv(const RocCurve& curve, const std::filesystem::path& path) {
  export_csv(std::span<const RocCurve>(&curve, 1), path);
}

void export_plot_data(std::span<const RocCurve> curves, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  bool first = true;
  for (const auto& c : curves) {
    if (!first) out << "\n\n";
    first = false;
    out << "# " << c.scheme << ' ' << c.image << ' ' << c.attack << ' ' << c.mask_mode << " a=" << format_double(c.a)
        << " N=" << c.n << " trials=" << c.trials << '\n';
    for (const auto& p : c.points) out << format_double(p.p_fa) << ' ' << format_double(p.p_m) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace dsmark
