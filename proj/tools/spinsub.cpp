#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "spinsub/classifier.hpp"
#include "spinsub/config.hpp"
#include "spinsub/diffraction.hpp"
#include "spinsub/render.hpp"

using namespace spinsub;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 invalid system or config.
constexpr int kExitInvalid = 2;

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateExpansion:
    case ErrorCode::NotExpansive:
    case ErrorCode::InvalidDigitSet:
    case ErrorCode::Config:
    case ErrorCode::NoGroupStructure:
      return true;
    default:
      return false;
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
    std::cerr << "wrote " << path << "\n";
  }
}

json to_json(const IntVec& v) { return json(std::vector<std::int64_t>(v.begin(), v.end())); }

int seed_letter(const Substitution& s, const std::string& text) {
  if (text.empty()) return 0;
  for (int i = 0; i < s.alphabet_size(); ++i)
    if (s.name(i) == text) return i;
  try {
    const int i = std::stoi(text);
    if (i >= 0 && i < s.alphabet_size()) return i;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::InvalidArgument, "unknown seed letter '" + text + "'");
}

Character character(const SpinSystem& sys, const std::string& text) {
  Character chi{parse_exponents(text)};
  if (!sys.group().valid_character(chi)) {
    throw Error(ErrorCode::InvalidArgument, "character '" + text + "' does not match group orders");
  }
  return chi;
}

json lyapunov_json(const LyapunovBound& b) {
  return {{"N", b.n},         {"f", b.f},           {"two_f", b.two_f()},      {"threshold", b.threshold},
          {"margin", b.margin()}, {"epsilon", b.epsilon}, {"standard_error", b.standard_error},
          {"points", b.points}, {"norm", norm_name(b.norm)}, {"singular", b.singular}};
}

json periodicity_json(const PeriodicityResult& p) {
  json j{{"periodic_candidate", p.periodic_candidate}, {"checked_cells", p.checked_cells}, {"radius", p.radius},
         {"level", p.level}, {"heuristic", true}};
  if (p.periodic_candidate) j["period"] = to_json(p.period);
  return j;
}

json verdict_json(const SpectralVerdict& v) {
  json j{{"character", v.chi.exponents},
         {"index", v.index},
         {"verdict", verdict_name(v.type)},
         {"rank", v.rank},
         {"unitary", v.unitarity.unitary},
         {"unitarity_residual", v.unitarity.residual},
         {"unitarity_exact", v.unitarity.exact},
         {"test", v.test},
         {"notes", v.notes}};
  if (v.multiplicity) j["multiplicity"] = v.multiplicity;
  if (v.multiplicity_bound) j["multiplicity_bound"] = v.multiplicity_bound;
  if (!v.lyapunov.empty()) {
    j["lyapunov"] = json::array();
    for (const auto& b : v.lyapunov) j["lyapunov"].push_back(lyapunov_json(b));
  }
  if (v.bs) {
    j["berlinkov_solomyak"] = {{"passes", v.bs->passes}, {"applicable", v.bs->applicable},
                               {"moduli", v.bs->moduli}, {"closest_gap", v.bs->closest_gap}};
  }
  if (v.periodicity) j["periodicity"] = periodicity_json(*v.periodicity);
  if (v.eigenvalues) {
    std::vector<std::vector<std::int64_t>> cols;
    const auto& e = *v.eigenvalues;
    for (int c = 0; c < e.numerator.cols(); ++c) {
      std::vector<std::int64_t> col;
      for (int r = 0; r < e.numerator.rows(); ++r) col.push_back(e.numerator(r, c));
      cols.push_back(col);
    }
    j["eigenvalue_generators"] = {{"depth", e.depth}, {"columns", cols}, {"denominator", e.denominator}};
  }
  return j;
}

json report_json(const SpectralReport& r) {
  json j{{"primitive", r.primitivity.primitive},
         {"primitivity_power", r.primitivity.power},
         {"total_lebesgue_multiplicity", r.total_lebesgue_multiplicity},
         {"lebesgue_multiplicity_parity", r.total_lebesgue_multiplicity % 2 == 0 ? "even" : "odd"},
         {"question_diagnostics",
          {{"unitary_characters", r.unitary_characters},
           {"sqrt_l_eigenvalues", r.sqrt_l_eigenvalues},
           {"unitary_times_l", r.unitary_times_l}}}};
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(verdict_json(v));
  return j;
}

json system_json(const SystemConfig& cfg) {
  const auto& ds = cfg.digits();
  json q = json::array();
  for (int r = 0; r < ds.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < ds.dim(); ++c) row.push_back(ds.expansion()(r, c));
    q.push_back(row);
  }
  json digits = json::array();
  for (const auto& d : ds.digits()) digits.push_back(to_json(d));
  json j{{"name", cfg.name}, {"kind", cfg.kind}, {"m", ds.dim()}, {"Q", q}, {"det", ds.det()}, {"digits", digits},
         {"alphabet", cfg.substitution().alphabet()}};
  if (cfg.spin) j["group_orders"] = cfg.spin->group().orders();
  return j;
}

ClassifyOptions classify_options(const SystemConfig& cfg, const std::string& n_list, long grid, const std::string& norm,
                                 bool assert_aperiodic) {
  ClassifyOptions o;
  o.assert_aperiodic = assert_aperiodic || cfg.assert_aperiodic;
  o.lyapunov_n = n_list.empty() ? cfg.lyapunov_n : parse_int_list(n_list);
  o.lyapunov.grid = grid > 0 ? grid : cfg.lyapunov_grid;
  o.lyapunov.norm = cfg.lyapunov_norm;
  if (norm == "spectral") o.lyapunov.norm = MatrixNorm::Spectral;
  if (norm == "frobenius") o.lyapunov.norm = MatrixNorm::Frobenius;
  o.lyapunov.se_factor = cfg.se_factor;
  return o;
}

int largest_level(const DigitSystem& ds, std::size_t budget) {
  int k = 0;
  std::size_t cells = 1;
  while (cells * static_cast<std::size_t>(ds.size()) <= budget) {
    cells *= static_cast<std::size_t>(ds.size());
    ++k;
  }
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("SPINSUB_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Spin substitutions over digit systems: supertiles, spectral classification, Lyapunov bounds, "
               "diffraction."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config, out, seed, chi_text, n_list, norm, json_out, heatmap, weights;
  int level = -1, px = 4, radius = 16, threads = 0, digit = -1;
  long grid = 0;
  double resolution = 0;
  bool assert_aperiodic = false, serial = false, tile = false, allow_rank_deficient = false;

  app.add_option("--threads", threads, "OpenMP threads (overrides SPINSUB_THREADS)");

  auto* validate = app.add_subcommand("validate", "Check the digit system and report tile measure");
  auto* supertile_cmd = app.add_subcommand("supertile", "Write S^n(seed) as JSON");
  auto* render_cmd = app.add_subcommand("render", "Render a supertile, factor image or digit tile");
  auto* classify_cmd = app.add_subcommand("classify", "Per-character spectral verdicts");
  auto* lyapunov_cmd = app.add_subcommand("lyapunov", "Lyapunov bounds f(N) as CSV");
  auto* diffract_cmd = app.add_subcommand("diffract", "Autocorrelation and periodogram of a weighted supertile");
  auto* factor_cmd = app.add_subcommand("factor", "Factor substitution of a character");
  auto* report_cmd = app.add_subcommand("report", "Full JSON report");

  for (auto* sub : {validate, supertile_cmd, render_cmd, classify_cmd, lyapunov_cmd, diffract_cmd, factor_cmd, report_cmd})
    sub->add_option("config", config, "System JSON file")->required()->check(CLI::ExistingFile);

  validate->add_option("--level", level, "Approximation level for the measure estimate");
  validate->add_option("--resolution", resolution, "Raster resolution (pixels per unit)");

  supertile_cmd->add_option("--seed", seed, "Seed letter name or index");
  supertile_cmd->add_option("--level", level, "Level n")->required();
  supertile_cmd->add_option("--out", out, "Output file (default stdout)");

  render_cmd->add_option("--seed", seed, "Seed letter name or index");
  render_cmd->add_option("--level", level, "Level n (required unless --tile)");
  render_cmd->add_option("--px", px, "Pixels per cell");
  render_cmd->add_option("--char", chi_text, "Render the factor image of this character, e.g. 1,0");
  render_cmd->add_flag("--tile", tile, "Render the digit tile instead (PPM, or SVG for .svg)");
  render_cmd->add_option("--resolution", resolution, "Digit-tile raster resolution");
  render_cmd->add_option("--out", out, "Output file")->required();

  classify_cmd->add_flag("--assert-aperiodic", assert_aperiodic, "Assert aperiodicity for the sc upgrade");
  classify_cmd->add_option("--N", n_list, "Lyapunov lengths, e.g. 10..13");
  classify_cmd->add_option("--grid", grid, "Quadrature points per axis");
  classify_cmd->add_option("--norm", norm, "frobenius or spectral")->check(CLI::IsMember({"frobenius", "spectral"}));
  classify_cmd->add_option("--json", json_out, "Write the JSON report here");

  lyapunov_cmd->add_option("--char", chi_text, "Character exponents")->required();
  lyapunov_cmd->add_option("--N", n_list, "Lengths, e.g. 10..13");
  lyapunov_cmd->add_option("--grid", grid, "Quadrature points per axis");
  lyapunov_cmd->add_option("--norm", norm, "frobenius or spectral")->check(CLI::IsMember({"frobenius", "spectral"}));
  lyapunov_cmd->add_flag("--serial", serial, "Use the serial reference kernel");
  lyapunov_cmd->add_flag("--allow-rank-deficient", allow_rank_deficient, "Integrate singular blocks anyway");
  lyapunov_cmd->add_option("--out", out, "CSV file (default stdout)");

  diffract_cmd->add_option("--char", chi_text, "Character exponents (spin systems)");
  diffract_cmd->add_option("--weights", weights, "Per-letter real weights (qubit systems), e.g. 1,-1");
  diffract_cmd->add_option("--digit", digit, "Restrict weights to one digit class");
  diffract_cmd->add_option("--seed", seed, "Seed letter name or index");
  diffract_cmd->add_option("--level", level, "Patch level")->required();
  diffract_cmd->add_option("--radius", radius, "Autocorrelation radius J");
  diffract_cmd->add_option("--grid", grid, "Periodogram points per axis");
  diffract_cmd->add_option("--out", out, "Autocorrelation CSV (default stdout)");
  diffract_cmd->add_option("--spectrum", json_out, "Periodogram CSV");
  diffract_cmd->add_option("--heatmap", heatmap, "Periodogram PGM (m = 2)");

  factor_cmd->add_option("--char", chi_text, "Character exponents")->required();
  factor_cmd->add_option("--json", json_out, "Write the factor as JSON here");

  report_cmd->add_flag("--assert-aperiodic", assert_aperiodic, "Assert aperiodicity for the sc upgrade");
  report_cmd->add_option("--N", n_list, "Lyapunov lengths");
  report_cmd->add_option("--grid", grid, "Quadrature points per axis");
  report_cmd->add_option("--out", out, "JSON file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    const auto cfg = load_config(config);
    const auto& sub = cfg.substitution();
    const auto& ds = cfg.digits();

    if (*validate) {
      const auto p = primitivity(sub);
      std::cout << "system " << cfg.name << ": m=" << ds.dim() << " det=" << ds.det() << " |D|=" << ds.size()
                << " alphabet=" << sub.alphabet_size() << "\n";
      std::cout << "digit set: complete residue system, Q expanding\n";
      std::cout << "primitive: " << (p.primitive ? "yes (power " + std::to_string(p.power) + ")" : "no") << "\n";
      const int k = level > 0 ? level : std::min(14, largest_level(ds, std::size_t{1} << 18));
      const auto r = raster_digit_tile(ds, k, resolution > 0 ? resolution : 64, cfg.measure_tolerance);
      std::printf("tile measure estimate: %.4f at level %d (%.4f at level %d); unit digit system: %s\n",
                  r.measure_estimate, k, r.previous_estimate, k - 1, r.unit_verdict ? "yes" : "no");
      return 0;
    }

    if (*supertile_cmd) {
      const int a = seed_letter(sub, seed);
      const auto t = supertile(sub, a, level);
      const auto dom = ds.digit_domain(level);
      json cells = json::array();
      for (std::size_t i = 0; i < t.cells.size(); ++i) cells.push_back({{"x", to_json(dom.at(i))}, {"letter", sub.name(t.cells[i])}});
      emit(json{{"seed", sub.name(a)}, {"level", level}, {"cells", cells}}.dump() + "\n", out);
      return 0;
    }

    if (*render_cmd) {
      if (tile) {
        const int k = level > 0 ? level : std::min(14, largest_level(ds, std::size_t{1} << 20));
        const auto r = raster_digit_tile(ds, k, resolution > 0 ? resolution : 64, cfg.measure_tolerance);
        const bool svg = out.size() > 4 && out.substr(out.size() - 4) == ".svg";
        emit(svg ? digit_tile_svg(r) : encode_ppm(render_digit_tile(r)), out);
        return 0;
      }
      if (level < 0) throw Error(ErrorCode::InvalidArgument, "--level is required");
      const int a = seed_letter(sub, seed);
      const auto t = supertile(sub, a, level);
      Image img;
      if (!chi_text.empty()) {
        const auto& sys = cfg.spin_system();
        const auto chi = character(sys, chi_text);
        const int classes = kernel(chi, sys.group()).quotient_order;
        img = render_factor_image(sys, t, chi, Palette::distinct(classes), px);
      } else {
        Palette pal;
        if (!cfg.palette.empty()) pal.colors = cfg.palette;
        else if (cfg.spin) pal = Palette::for_spin_system(*cfg.spin);
        else pal = Palette::distinct(sub.alphabet_size());
        img = render_supertile(ds, t, pal, px);
      }
      emit(encode_ppm(img), out);
      return 0;
    }

    if (*classify_cmd || *report_cmd) {
      const auto& sys = cfg.spin_system();
      const auto opts = classify_options(cfg, n_list, grid, norm, assert_aperiodic);
      const auto r = classify(sys, opts);
      if (*classify_cmd) {
        for (const auto& v : r.verdicts) {
          std::printf("chi(%s): %s", v.chi.str().c_str(), verdict_name(v.type));
          if (v.multiplicity) std::printf(" x%d", v.multiplicity);
          std::printf("  [%s]\n", v.test.c_str());
        }
        std::printf("total Lebesgue multiplicity: %d\n", r.total_lebesgue_multiplicity);
        if (!json_out.empty()) emit(report_json(r).dump(2) + "\n", json_out);
        return 0;
      }
      json j{{"system", system_json(cfg)}, {"classification", report_json(r)}};
      const auto freq = letter_frequencies(sub);
      j["letter_frequencies"] = std::vector<double>(freq.data(), freq.data() + freq.size());
      const int n = std::min(ds.dim() == 1 ? 8 : 6, largest_level(ds, 1u << 16));
      const auto skew = verify_skew_consistency(sys, n, ds.dim() == 1 ? shifts_in_ball(1, 8) : axis_shifts(ds.dim()));
      j["skew_consistency"] = {{"level", skew.level}, {"pairs", skew.pairs}, {"violations", skew.violations}};
      emit(j.dump(2) + "\n", out);
      return 0;
    }

    if (*lyapunov_cmd) {
      const auto& sys = cfg.spin_system();
      const auto block = fourier_block(sys, character(sys, chi_text));
      auto opts = classify_options(cfg, n_list, grid, norm, false).lyapunov;
      opts.parallel = !serial;
      opts.allow_rank_deficient = allow_rank_deficient;
      std::vector<LyapunovBound> rows;
      for (int n : n_list.empty() ? cfg.lyapunov_n : parse_int_list(n_list)) rows.push_back(lyapunov_bound(block, n, opts));
      emit(lyapunov_csv(rows), out);
      return 0;
    }

    if (*diffract_cmd) {
      const int a = seed_letter(sub, seed);
      WeightedPatch patch;
      if (!chi_text.empty()) {
        const auto& sys = cfg.spin_system();
        patch = make_weighted_patch(sys, sys.letter_at(a), level, character(sys, chi_text),
                                    digit >= 0 ? std::optional<int>(digit) : std::nullopt);
      } else {
        std::vector<std::complex<double>> w;
        for (const auto& x : parse_exponents(weights)) w.emplace_back(x, 0.0);
        if (static_cast<int>(w.size()) != sub.alphabet_size()) {
          throw Error(ErrorCode::InvalidArgument, "--weights needs one value per letter");
        }
        patch = make_weighted_patch(sub, a, level, w);
      }
      const auto t = autocorrelation(patch, radius);
      emit(autocorrelation_csv(t), out);
      std::fprintf(stderr, "cells %zu, max |eta(j)| for 0<|j|<=%d: %.3e\n", patch.cells, radius, t.max_off_origin());
      if (!json_out.empty() || !heatmap.empty()) {
        long k = grid;
        if (k <= 0) {
          k = 1;
          for (long e : patch.grid.extent) k = std::max(k, e);
        }
        const auto d = diffraction_estimate(patch, k);
        std::fprintf(stderr, "periodogram: mean %.4f max %.4f (max/mean %.2f) peak fraction %.4f\n", d.mean, d.max,
                     d.max_over_mean(), d.peak_fraction);
        if (!json_out.empty()) emit(diffraction_csv(d), json_out);
        if (!heatmap.empty()) {
          if (d.dim != 2) throw Error(ErrorCode::InvalidArgument, "--heatmap needs m = 2");
          emit(encode_pgm_heatmap(d.intensity, static_cast<int>(k), static_cast<int>(k)), heatmap);
        }
      }
      return 0;
    }

    if (*factor_cmd) {
      const auto& sys = cfg.spin_system();
      const auto f = factor_substitution(sys, character(sys, chi_text));
      const auto& s = f.substitution;
      std::printf("factor of chi(%s): |G/ker chi| = %d, %s, %s\n", f.chi.str().c_str(), f.quotient_order,
                  f.rank_one ? "rank one" : "general", f.bijective ? "bijective" : "not bijective");
      json rules = json::object();
      for (int x = 0; x < s.alphabet_size(); ++x) {
        std::string w;
        json word = json::array();
        for (int d = 0; d < s.digit_count(); ++d) {
          w += (d ? " " : "") + s.name(s.apply(x, d));
          word.push_back(s.name(s.apply(x, d)));
        }
        std::printf("  %s -> %s\n", s.name(x).c_str(), w.c_str());
        rules[s.name(x)] = word;
      }
      const auto& p = f.periodicity;
      std::printf("periodicity scan (heuristic, level %d, radius %d): %s\n", p.level, p.radius,
                  p.periodic_candidate ? "periodic candidate" : "no period found");
      if (!json_out.empty()) {
        json j{{"character", f.chi.exponents}, {"quotient_order", f.quotient_order}, {"rank_one", f.rank_one},
               {"bijective", f.bijective},     {"alphabet", s.alphabet()},          {"rules", rules},
               {"periodicity", periodicity_json(p)}};
        emit(j.dump(2) + "\n", json_out);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInvalid : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
