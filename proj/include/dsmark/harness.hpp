#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsmark/attacks.hpp"
#include "dsmark/blockdct.hpp"
#include "dsmark/image.hpp"
#include "dsmark/schemes.hpp"
#include "dsmark/stats.hpp"
#include "dsmark/watson.hpp"

namespace dsmark {

/// One Monte Carlo experiment: random permutations of a host image's
/// coefficients, embedded with one scheme, optionally attacked, detected.
struct TrialConfig {
  Scheme scheme = Scheme::DsAss;
  std::filesystem::path image;
  int zigzag_index = 5;
  int n = 2000;
  double a = 1.0;
  MaskParams masks;
  AttackSpec attack;
  int trials = 10'000;
  std::uint64_t seed = 1;
  /// Target false-alarm rates; empty means default_pfa_grid(trials).
  std::vector<double> pfa_grid;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 1;
  /// Detector recomputes masks from the received data (true) or receives
  /// the embedder's masks as side information (false).
  bool blind_masks = true;
  SensitivityTable table = SensitivityTable::watson();
  QuantTable quant_base = jpeg_luminance_table();

  void validate() const;
};

struct RocPoint {
  double p_fa = 0.0;
  double p_m = 0.0;
};

struct RocCurve {
  std::string scheme;
  std::string image;
  std::string attack;
  std::string mask_mode;
  double a = 0.0;
  int n = 0;
  int trials = 0;
  std::vector<RocPoint> points;

  /// p_m at exactly `p_fa`, if that grid point exists.
  std::optional<double> miss_at(double p_fa) const;
};

/// Host coefficients and everything the per-trial channel needs.
struct HostModel {
  std::string label;
  int natural_index = 0;
  HostVector x;                 ///< target coefficient of every block
  MaskVector m;                 ///< embedder masks aligned with x
  GgdParams ggd;                ///< detector-side constants, fitted once
  CauchyParams cauchy;
  // Image-backed hosts only (empty for raw vectors).
  BlockSpectrum spectrum;
  std::vector<Block> pixels;    ///< block pixels as doubles, raster order

  bool image_backed() const { return !spectrum.blocks.empty(); }
};

HostModel host_from_image(const Image& img, std::string label, const TrialConfig& cfg);
/// Coefficient-domain host (synthetic data). Only AttackKind::None and
/// AwgnCoefficients apply, and detectors always get the embedder's masks.
HostModel host_from_vectors(HostVector x, MaskVector m, std::string label);

/// Raw detection statistics (signed L) for one scheme, indexed by trial.
struct StatisticPopulations {
  Scheme scheme = Scheme::AssCor;
  std::vector<double> h0;
  std::vector<double> h1;
};

std::vector<StatisticPopulations> simulate(const HostModel& host, const TrialConfig& cfg,
                                           std::span<const Scheme> schemes);

/// Log-spaced default grid {1e-3 ... 0.5}, dropping points below 10/trials.
std::vector<double> default_pfa_grid(int trials);

/// (1 - p_fa) empirical quantile of the H0 statistics (|L| when
/// double-sided): at most floor(p_fa * n) values exceed the result.
/// Throws if p_fa * n < 1, i.e. the population cannot resolve p_fa.
double empirical_threshold(std::span<const double> h0, double p_fa, Rule rule);
/// Fraction of H1 statistics that the rule sends to H0 at threshold psi.
double empirical_miss_rate(std::span<const double> h1, double psi, Rule rule);

RocCurve roc_from_populations(const StatisticPopulations& pop, const TrialConfig& cfg, std::string image_label,
                              std::span<const double> pfa_grid);

RocCurve run_roc(const TrialConfig& cfg);
/// Several schemes over the same trials. A scheme's curve does not depend
/// on which other schemes run alongside it.
std::vector<RocCurve> run_roc(const TrialConfig& cfg, std::span<const Scheme> schemes);
std::vector<RocCurve> run_roc(const HostModel& host, const TrialConfig& cfg, std::span<const Scheme> schemes);

struct ClosedFormPoint {
  double p_fa = 0.0;
  double predicted_pm = 0.0;
  double empirical_pm = 0.0;
  double empirical_pfa = 0.0;
  double pm_tolerance = 0.0;
  double pfa_tolerance = 0.0;
  bool pass = false;
};

struct ClosedFormReport {
  int n = 0;
  double k = 0.0;
  double sigma = 0.0;
  int trials = 0;
  std::vector<ClosedFormPoint> points;
  double max_abs_deviation = 0.0;
  bool pass = false;
};

using MissFormula = std::function<double(double p_fa, double k, int n, double sigma)>;

/// Monte Carlo of the full DS-ASS chain on i.i.d. N(0, sigma^2) hosts with
/// uniform masks m_i = k and a = 1, detected by the correlator at the
/// analytic threshold psi = sigma/sqrt(N) Q^-1(p_fa/2). Each grid point
/// passes when both the miss rate and the realized false-alarm rate lie
/// within 3 binomial standard errors of `formula` and p_fa; a predicted
/// miss rate of exactly 0 must be matched exactly.
ClosedFormReport validate_closed_form(int n, double k, double sigma, std::span<const double> pfa_grid, int trials,
                                      std::uint64_t seed, const MissFormula& formula = dsass_miss_probability);

/// Header `scheme,image,attack,mask_mode,a,N,trials,p_fa,p_m`, one row per point.
void write_csv(std::ostream& out, std::span<const RocCurve> curves);
void export_csv(std::span<const RocCurve> curves, const std::filesystem::path& path);
void export_csv(const RocCurve& curve, const std::filesystem::path& path);
/// Whitespace-separated `p_fa p_m` columns, one block per curve preceded by
/// a `#` description line, blocks separated by two blank lines.
void export_plot_data(std::span<const RocCurve> curves, const std::filesystem::path& path);

/// Shortest decimal that round-trips to `v`.
std::string format_double(double v);

}  // namespace dsmark
