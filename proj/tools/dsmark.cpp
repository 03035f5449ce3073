#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmark/attacks.hpp"
#include "dsmark/error.hpp"
#include "dsmark/harness.hpp"
#include "dsmark/image.hpp"
#include "dsmark/sidecar.hpp"
#include "dsmark/stats.hpp"
#include "dsmark/watson.hpp"

namespace fs = std::filesystem;
using namespace dsmark;

namespace {

constexpr int kExitH1 = 0;
constexpr int kExitH0 = 1;
constexpr int kExitError = 2;

struct EstimateArgs {
  fs::path image;
  int zigzag_index = 5;
};

struct EmbedArgs {
  fs::path image;
  std::string scheme = "DS-ASS";
  double a = 1.0;
  int n = 2000;
  std::uint64_t seed = 1;
  std::string mask_mode = "freq+lum";
  int zigzag_index = 5;
  fs::path out;
  fs::path sidecar;
  fs::path table;
};

struct DetectArgs {
  fs::path image;
  fs::path sidecar;
  std::string detector;
  std::optional<double> psi;
  std::optional<double> pfa;
  int keys = 1000;
  fs::path original;
  fs::path table;
};

struct AttackArgs {
  fs::path image;
  std::string kind = "awgn";
  double sigma = 5.0;
  int quality = 50;
  std::uint64_t seed = 1;
  fs::path out;
  fs::path quant_table;
};

struct RocArgs {
  fs::path image;
  std::vector<std::string> schemes{"all"};
  int zigzag_index = 5;
  int n = 2000;
  double a = 1.0;
  std::string mask_mode = "freq+lum";
  std::string attack = "none";
  double sigma = 5.0;
  int quality = 50;
  int trials = 10'000;
  std::uint64_t seed = 1;
  std::vector<double> pfa;
  int threads = 1;
  bool side_masks = false;
  fs::path out;
  fs::path plot_data;
  fs::path table;
  fs::path quant_table;
};

struct ValidateArgs {
  int n = 2000;
  double sigma = 20.0;
  std::optional<double> k;
  std::vector<double> pfa_grid{1e-3, 1e-2, 1e-1};
  int trials = 100'000;
  std::uint64_t seed = 1;
};

SensitivityTable table_or_default(const fs::path& p) {
  return p.empty() ? SensitivityTable::watson() : SensitivityTable::load(p);
}

int run_estimate(const EstimateArgs& args) {
  const Image img = load_pgm(args.image);
  const HostVector x = zigzag_extract(block_dct(img), args.zigzag_index);
  const GgdParams g = fit_ggd(x);
  const CauchyParams c = fit_cauchy(x);
  std::cout << "c=" << format_double(g.c) << '\n'
            << "sigma_x=" << format_double(g.sigma_x) << '\n'
            << "gamma=" << format_double(c.gamma) << '\n'
            << "zigzag_index=" << args.zigzag_index << '\n'
            << "samples=" << x.size() << '\n';
  return 0;
}

int run_embed(const EmbedArgs& args) {
  Sidecar s;
  s.seed = args.seed;
  s.scheme = parse_scheme(args.scheme);
  s.a = args.a;
  s.n = args.n;
  s.mask_mode = parse_mask_mode(args.mask_mode);
  s.zigzag_index = args.zigzag_index;
  const Image img = load_pgm(args.image);
  const EmbedResult res = embed_image(img, s, table_or_default(args.table));
  const fs::path sidecar = args.sidecar.empty() ? fs::path(args.out.string() + ".sidecar") : args.sidecar;
  save_pgm(res.image, args.out);
  save_sidecar(s, sidecar);
  std::cout << "psnr=" << format_double(res.psnr) << '\n' << "sidecar=" << sidecar.string() << '\n';
  return 0;
}

int run_detect(const DetectArgs& args) {
  const Image img = load_pgm(args.image);
  const Sidecar s = load_sidecar(args.sidecar);
  DetectOptions opts;
  if (!args.detector.empty()) opts.detector = parse_detector(args.detector);
  opts.psi = args.psi;
  opts.p_fa = args.pfa;
  if (!opts.psi && !opts.p_fa) opts.p_fa = 1e-2;
  opts.calibration_keys = args.keys;
  opts.table = table_or_default(args.table);
  std::optional<Image> original;
  if (!args.original.empty()) {
    original = load_pgm(args.original);
    opts.original = &*original;
  }
  const DetectionResult r = detect_image(img, s, opts);
  std::cout << "detector=" << to_string(opts.detector.value_or(detector_for(s.scheme))) << '\n'
            << "rule=" << (r.rule == Rule::DoubleSided ? "double-sided" : "single-sided") << '\n'
            << "statistic=" << format_double(r.statistic) << '\n'
            << "threshold=" << format_double(r.threshold) << '\n'
            << "decision=" << (r.decision == Hypothesis::H1 ? "H1" : "H0") << '\n';
  return r.decision == Hypothesis::H1 ? kExitH1 : kExitH0;
}

int run_attack(const AttackArgs& args) {
  const Image img = load_pgm(args.image);
  AttackSpec spec;
  spec.kind = parse_attack_kind(args.kind);
  spec.noise_sigma = args.sigma;
  spec.quality = args.quality;
  spec.seed = args.seed;
  Image out = img;
  if (spec.kind == AttackKind::Jpeg && !args.quant_table.empty()) {
    spec.validate();
    out = attack_jpeg(img, spec.quality, load_quant_table(args.quant_table));
  } else if (spec.kind == AttackKind::AwgnCoefficients) {
    spec.validate();
    out = block_idct(attack_awgn_coefficients(block_dct(img), spec.noise_sigma, spec.seed));
  } else {
    out = apply_attack(img, spec);
  }
  save_pgm(out, args.out);
  std::cout << "attack=" << spec.label() << '\n' << "psnr=" << format_double(psnr(img, out)) << '\n';
  return 0;
}

int run_roc_cmd(const RocArgs& args) {
  TrialConfig cfg;
  cfg.image = args.image;
  cfg.zigzag_index = args.zigzag_index;
  cfg.n = args.n;
  cfg.a = args.a;
  cfg.masks.mode = parse_mask_mode(args.mask_mode);
  cfg.attack.kind = parse_attack_kind(args.attack);
  cfg.attack.noise_sigma = args.sigma;
  cfg.attack.quality = args.quality;
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.pfa_grid = args.pfa;
  cfg.threads = args.threads;
  cfg.blind_masks = !args.side_masks;
  if (!args.table.empty()) cfg.table = SensitivityTable::load(args.table);
  if (!args.quant_table.empty()) cfg.quant_base = load_quant_table(args.quant_table);

  std::vector<Scheme> schemes;
  for (const auto& name : args.schemes) {
    if (name == "all") {
      schemes.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
    } else {
      schemes.push_back(parse_scheme(name));
    }
  }
  const auto curves = run_roc(cfg, schemes);
  if (args.out.empty()) {
    write_csv(std::cout, curves);
  } else {
    export_csv(curves, args.out);
  }
  if (!args.plot_data.empty()) export_plot_data(curves, args.plot_data);
  return 0;
}

int run_validate(const ValidateArgs& args) {
  const double k = args.k.value_or(args.sigma / std::sqrt(static_cast<double>(args.n)));
  const ClosedFormReport rep = validate_closed_form(args.n, k, args.sigma, args.pfa_grid, args.trials, args.seed);
  std::cout << "N=" << rep.n << " k=" << format_double(rep.k) << " sigma=" << format_double(rep.sigma)
            << " trials=" << rep.trials << '\n';
  std::cout << "p_fa,predicted_pm,empirical_pm,pm_tolerance,empirical_pfa,pfa_tolerance,result\n";
  for (const auto& p : rep.points) {
    std::cout << format_double(p.p_fa) << ',' << format_double(p.predicted_pm) << ','
              << format_double(p.empirical_pm) << ',' << format_double(p.pm_tolerance) << ','
              << format_double(p.empirical_pfa) << ',' << format_double(p.pfa_tolerance) << ','
              << (p.pass ? "PASS" : "FAIL") << '\n';
  }
  std::cout << "max_abs_deviation=" << format_double(rep.max_abs_deviation) << '\n'
            << (rep.pass ? "PASS" : "FAIL") << '\n';
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCT-domain perceptual watermarking toolkit"};
  app.require_subcommand(1, 1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Fit GGD and Cauchy parameters to one zigzag coefficient");
  c_est->add_option("image", est.image, "Input PGM")->required()->check(CLI::ExistingFile);
  c_est->add_option("--zigzag-index", est.zigzag_index, "1-based zigzag position")->capture_default_str();

  EmbedArgs emb;
  auto* c_emb = app.add_subcommand("embed", "Embed a watermark and write the image plus a sidecar");
  c_emb->add_option("image", emb.image, "Input PGM")->required()->check(CLI::ExistingFile);
  c_emb->add_option("--scheme", emb.scheme, "ASS-COR, Hernandez, Briassouli, DS-ASS or DS-Cauchy")->capture_default_str();
  c_emb->add_option("--a", emb.a, "Embedding strength")->capture_default_str();
  c_emb->add_option("--N", emb.n, "Watermark length (even)")->capture_default_str();
  c_emb->add_option("--seed", emb.seed, "Key seed")->capture_default_str();
  c_emb->add_option("--mask-mode", emb.mask_mode, "freq+lum or freq+lum+contrast")->capture_default_str();
  c_emb->add_option("--zigzag-index", emb.zigzag_index, "1-based zigzag position")->capture_default_str();
  c_emb->add_option("--out", emb.out, "Output PGM")->required();
  c_emb->add_option("--sidecar", emb.sidecar, "Sidecar path (default: <out>.sidecar)");
  c_emb->add_option("--table", emb.table, "8x8 sensitivity table file (default: Watson)")->check(CLI::ExistingFile);

  DetectArgs det;
  auto* c_det = app.add_subcommand("detect", "Detect a watermark described by a sidecar");
  c_det->add_option("image", det.image, "Received PGM")->required()->check(CLI::ExistingFile);
  c_det->add_option("sidecar", det.sidecar, "Sidecar written by embed")->required()->check(CLI::ExistingFile);
  c_det->add_option("--detector", det.detector, "correlator, ggd or cauchy (default: the scheme's)");
  auto* o_psi = c_det->add_option("--psi", det.psi, "Fixed threshold");
  auto* o_pfa = c_det->add_option("--pfa", det.pfa, "Calibrate the threshold to this false-alarm rate (default 0.01)");
  o_psi->excludes(o_pfa);
  c_det->add_option("--keys", det.keys, "Random keys used for calibration")->capture_default_str();
  c_det->add_option("--original", det.original, "Unwatermarked original for side-information masks")
      ->check(CLI::ExistingFile);
  c_det->add_option("--table", det.table, "8x8 sensitivity table file (default: Watson)")->check(CLI::ExistingFile);

  AttackArgs att;
  auto* c_att = app.add_subcommand("attack", "Apply an attack to an image");
  c_att->add_option("image", att.image, "Input PGM")->required()->check(CLI::ExistingFile);
  c_att->add_option("--kind", att.kind, "none, awgn, awgn-coef or jpeg")->capture_default_str();
  c_att->add_option("--sigma", att.sigma, "Noise standard deviation")->capture_default_str();
  c_att->add_option("--quality", att.quality, "JPEG quality factor 1..100")->capture_default_str();
  c_att->add_option("--seed", att.seed, "Noise seed")->capture_default_str();
  c_att->add_option("--out", att.out, "Output PGM")->required();
  c_att->add_option("--quant-table", att.quant_table, "8x8 JPEG base table file")->check(CLI::ExistingFile);

  RocArgs roc;
  auto* c_roc = app.add_subcommand("roc", "Monte Carlo ROC curves over random permutations");
  c_roc->add_option("--image", roc.image, "Host PGM")->required()->check(CLI::ExistingFile);
  c_roc->add_option("--scheme", roc.schemes, "Schemes to run, repeatable; 'all' runs every scheme")
      ->capture_default_str();
  c_roc->add_option("--zigzag-index", roc.zigzag_index, "1-based zigzag position")->capture_default_str();
  c_roc->add_option("--N", roc.n, "Watermark length (even)")->capture_default_str();
  c_roc->add_option("--a", roc.a, "Embedding strength")->capture_default_str();
  c_roc->add_option("--mask-mode", roc.mask_mode, "freq+lum or freq+lum+contrast")->capture_default_str();
  c_roc->add_option("--attack", roc.attack, "none, awgn, awgn-coef or jpeg")->capture_default_str();
  c_roc->add_option("--sigma", roc.sigma, "AWGN standard deviation")->capture_default_str();
  c_roc->add_option("--quality", roc.quality, "JPEG quality factor")->capture_default_str();
  c_roc->add_option("--trials", roc.trials, "Monte Carlo trials")->capture_default_str();
  c_roc->add_option("--seed", roc.seed, "Master seed")->capture_default_str();
  c_roc->add_option("--pfa", roc.pfa, "False-alarm targets (default: log grid down to 10/trials)")->delimiter(',');
  c_roc->add_option("--threads", roc.threads, "Worker threads, 0 = all cores")->capture_default_str();
  c_roc->add_flag("--side-masks", roc.side_masks, "Give detectors the embedder's masks instead of recomputing them");
  c_roc->add_option("--out", roc.out, "CSV output (default: stdout)");
  c_roc->add_option("--plot-data", roc.plot_data, "Also write whitespace-separated p_fa p_m columns");
  c_roc->add_option("--table", roc.table, "8x8 sensitivity table file")->check(CLI::ExistingFile);
  c_roc->add_option("--quant-table", roc.quant_table, "8x8 JPEG base table file")->check(CLI::ExistingFile);

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "Check the DS-ASS miss-probability formula by simulation");
  c_val->add_option("--N", val.n, "Watermark length")->capture_default_str();
  c_val->add_option("--k", val.k, "Mean mask amplitude a*mean(m) (default: sigma/sqrt(N))");
  c_val->add_option("--sigma", val.sigma, "Host standard deviation")->capture_default_str();
  c_val->add_option("--pfa-grid", val.pfa_grid, "False-alarm targets")->delimiter(',')->capture_default_str();
  c_val->add_option("--trials", val.trials, "Monte Carlo trials")->capture_default_str();
  c_val->add_option("--seed", val.seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*c_est) return run_estimate(est);
    if (*c_emb) return run_embed(emb);
    if (*c_det) return run_detect(det);
    if (*c_att) return run_attack(att);
    if (*c_roc) return run_roc_cmd(roc);
    if (*c_val) return run_validate(val);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
