// Copyright 2026 The speechscale Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "speechscale/acoustic.hpp"
#include "speechscale/align.hpp"
#include "speechscale/bundle.hpp"
#include "speechscale/corpus.hpp"
#include "speechscale/error.hpp"
#include "speechscale/estimate.hpp"
#include "speechscale/melfit.hpp"
#include "speechscale/warp.hpp"

namespace speechscale::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("invalid number '" + s + "' for " + what);
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> values;
  for (const auto& part : split(s, ',')) values.push_back(to_double(part, what));
  return values;
}

std::pair<double, double> parse_range(const std::string& s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidArgument(what + " must be given as min:max");
  return {to_double(s.substr(0, colon), what), to_double(s.substr(colon + 1), what)};
}

PartitionMode parse_partition(const std::string& s) {
  if (s == "per-formant") return PartitionMode::per_formant_index();
  if (s.rfind("explicit:", 0) == 0) {
    return PartitionMode::explicit_bounds(parse_list(s.substr(9), "--partition"));
  }
  throw InvalidArgument("--partition must be 'per-formant' or 'explicit:b0,b1,...'");
}

Reference parse_reference(const std::string& s) {
  return s == "grand-mean" ? Reference::grand_mean() : Reference::speaker(s);
}

Corpus load(const PipelineConfig& config) {
  if (config.corpus.empty()) throw InvalidArgument("--corpus is required");
  std::optional<ColumnMap> map;
  if (!config.column_map.empty()) map = load_column_map(config.column_map);
  return load_corpus(config.corpus, map);
}

std::vector<std::string> selected_vowels(const PipelineConfig& config, const Corpus& corpus) {
  if (config.vowels.empty()) return corpus.vowels;
  for (const auto& v : config.vowels) {
    if (std::find(corpus.vowels.begin(), corpus.vowels.end(), v) == corpus.vowels.end()) {
      throw InvalidArgument("vowel '" + v + "' is not in the corpus");
    }
  }
  return config.vowels;
}

ScaleEstimate run_estimate(const PipelineConfig& config, const Corpus& corpus) {
  if (corpus.records.size() < 2) throw InvalidArgument("estimation needs at least two speakers");
  return estimate_scale(corpus.records, selected_vowels(config, corpus),
                        parse_partition(config.partition), parse_reference(config.reference),
                        Rank1Options{config.max_iters, config.tol});
}

std::string warp_ref(const PiecewiseWarp& warp) { return "piecewise sha256:" + sha256_hex(to_json(warp)); }

struct ResolvedWarp {
  WarpFunction warp;
  std::string ref;
};

ResolvedWarp resolve_warp(const PipelineConfig& config) {
  if (config.warp == "log") return {WarpFunction::log(), "log"};
  if (config.warp == "demo") return {WarpFunction::demo(), "demo_quadratic_log"};
  if (config.warp == "identity") return {WarpFunction::identity(), "identity"};
  if (config.warp != "scale") throw InvalidArgument("--warp must be scale, log, demo or identity");
  if (config.scale.empty()) throw InvalidArgument("--scale is required with --warp scale");
  PiecewiseWarp pw = load_warp(config.scale);
  std::string ref = warp_ref(pw);
  return {WarpFunction::piecewise(std::move(pw), config.extend), std::move(ref)};
}

AlignmentResult run_align(const PipelineConfig& config, const Corpus& corpus,
                          const WarpFunction& warp) {
  std::string vowel = config.vowel;
  if (vowel.empty()) vowel = selected_vowels(config, corpus).front();
  return align_population(corpus.records, warp, vowel);
}

MelReport run_fit_mel(const PipelineConfig& config, const PiecewiseWarp& pw) {
  const WarpFunction warp = WarpFunction::piecewise(pw, config.extend);
  const auto [lo, hi] = config.grid_range.value_or(
      std::pair{pw.partition().lower(), pw.partition().upper()});
  const std::vector<double> grid = log_spaced_grid(lo, hi, config.grid_points);
  std::vector<MelSample> samples;
  for (double f : grid) samples.push_back({f, warp.eval(f)});

  MelReport report;
  report.fit = fit_mel(samples, MelFitOptions{config.b_range, config.calibrate, 1e-6});
  report.reference = kStandardMel;
  report.comparison = compare_scales(warp, kStandardMel, grid);
  report.warp_ref = warp_ref(pw);
  return report;
}

fs::path output_path(const PipelineConfig& config, const char* fallback) {
  return config.out.empty() ? fs::path(fallback) : fs::path(config.out);
}

void print_estimate(std::ostream& out, const ScaleEstimate& e) {
  const auto& b = e.partition.boundaries();
  out << "band  range_hz  beta\n";
  for (std::size_t l = 0; l < e.betas.size(); ++l) {
    out << (l + 1) << "  [" << num(b[l]) << ", " << num(b[l + 1]) << "]  " << num(e.betas[l])
        << "\n";
  }
  out << "residual_rms: " << num(e.residual_rms) << " nepers\n";
  const auto [lo, hi] = std::minmax_element(e.speaker_factors.begin(), e.speaker_factors.end());
  out << "speaker factors: " << num(*lo) << " .. " << num(*hi) << " nepers ("
      << e.speaker_factors.size() << " speakers)\n";
  if (!e.converged) out << "warning: ALS stopped at max_iters without converging\n";
}

void print_alignment(std::ostream& out, const AlignmentResult& r) {
  out << "vowel " << r.vowel << ", " << r.speaker_ids.size() << " speakers, warp " << r.warp_name
      << "\n";
  out << "formant  spread_before  spread_after  improvement\n";
  for (std::size_t k = 0; k < r.spread_before.size(); ++k) {
    out << "F" << (k + 1) << "  " << num(r.spread_before[k]) << "  " << num(r.spread_after[k])
        << "  " << num(r.improvement_ratio[k]) << "\n";
  }
}

void print_mel(std::ostream& out, const MelReport& m) {
  out << "mel-form fit: a = " << num(m.fit.params.a) << ", b = " << num(m.fit.params.b)
      << " Hz, R^2 = " << num(m.fit.r_squared) << ", rms = " << num(m.fit.rms_error) << "\n";
  out << "vs mel(" << num(m.reference.a) << ", " << num(m.reference.b)
      << "): rms deviation = " << num(m.comparison.rms_deviation)
      << ", max deviation = " << num(m.comparison.max_deviation) << " mel\n";
}

// Options shared by the corpus-reading commands.
void add_corpus_options(CLI::App& cmd, PipelineConfig& c, std::string& vowels) {
  cmd.add_option("--corpus", c.corpus, "Formant corpus (canonical CSV unless --column-map)");
  cmd.add_option("--column-map", c.column_map, "Column map JSON for non-canonical corpora");
  cmd.add_option("--vowels", vowels, "Comma-separated vowel selection (default: all)");
}

// ---- synth ---------------------------------------------------------------

struct SynthOptions {
  int speakers = 10;
  std::string oral_range = "0.06:0.10";
  double pharynx_length = 0.09;
  double area_ratio = 8.0;
  double speed_of_sound = kDefaultSpeedOfSound;
  int formants = 3;
  std::string vowel = "aa";
  std::string betas;
  std::string base_formants;
  std::string log_factor_range = "-0.25:0.25";
  double noise = 0.0;
};

std::vector<SpeakerRecord> synthesize(const SynthOptions& o, std::uint64_t seed) {
  const auto oral = parse_range(o.oral_range, "--oral-range");
  const TubeConfig base = two_tube(o.pharynx_length, 1.0, oral.first, o.area_ratio, o.speed_of_sound);
  if (o.betas.empty()) {
    std::vector<FormantSet> sets;
    for (auto& m : synth_population(base, o.speakers, oral, o.formants, seed, o.vowel)) {
      sets.push_back(std::move(m.formants));
    }
    return group_by_speaker(sets);
  }
  FormantSet reference;
  reference.vowel = o.vowel;
  if (!o.base_formants.empty()) {
    reference.formants = parse_list(o.base_formants, "--base-formants");
  } else {
    TubeConfig mid = base;
    mid.sections[1].length = 0.5 * (oral.first + oral.second);
    auto search = formants(mid, o.formants, resonance_search_limit(mid, o.formants));
    reference.formants = std::move(search.set.formants);
  }
  BandScaledPopulationOptions options;
  options.speaker_count = o.speakers;
  options.log_factor_range = parse_range(o.log_factor_range, "--log-factor-range");
  options.noise_sigma = o.noise;
  options.seed = seed;
  auto population =
      synth_band_scaled_population(reference, parse_list(o.betas, "--betas"), options);
  return group_by_speaker(population.speakers);
}

int cmd_synth(const SynthOptions& o, const PipelineConfig& c, std::ostream& out) {
  const auto records = synthesize(o, c.seed);
  const fs::path path = output_path(c, "synth.csv");
  write_text_file(path, corpus_to_csv(records));

  std::vector<double> log_sum;
  for (const auto& r : records) {
    const auto& f = r.tokens.front().formants;
    log_sum.resize(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) log_sum[k] += std::log(f[k]);
  }
  out << "wrote " << records.size() << " speakers to " << path.string() << "\n";
  out << "geometric mean formants (Hz):";
  for (double s : log_sum) out << " " << num(std::exp(s / static_cast<double>(records.size())));
  out << "\n";
  return kExitOk;
}

// ---- pipeline ------------------------------------------------------------

struct StageRecord {
  std::string stage;
  std::string file;
  std::string status = "skipped";
  std::string sha256;
  std::string error;
};

int cmd_pipeline(const PipelineConfig& c, const std::string& config_path, std::ostream& out,
                 std::ostream& err) {
  const fs::path dir = c.out.empty() ? fs::path("speechscale_out") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

  std::vector<StageRecord> stages{{"corpus", "corpus.json"},
                                  {"estimate", "scale.json"},
                                  {"align", "alignment.json"},
                                  {"fit-mel", "melfit.json"}};
  const auto emit = [&](StageRecord& stage, const std::string& text) {
    write_text_file(dir / stage.file, text);
    stage.status = "ok";
    stage.sha256 = sha256_hex(text);
  };

  int code = kExitOk;
  std::size_t current = 0;
  try {
    const Corpus corpus = load(c);
    emit(stages[0], corpus_summary_json(corpus));
    current = 1;
    const ScaleEstimate estimate = run_estimate(c, corpus);
    emit(stages[1], to_json(estimate));
    current = 2;
    WarpFunction warp = WarpFunction::piecewise(estimate.warp, c.extend);
    std::string ref = warp_ref(estimate.warp);
    if (c.warp != "scale") {
      auto resolved = resolve_warp(c);
      warp = std::move(resolved.warp);
      ref = std::move(resolved.ref);
    }
    const AlignmentResult alignment = run_align(c, corpus, warp);
    emit(stages[2], to_json(alignment, ref));
    current = 3;
    emit(stages[3], to_json(run_fit_mel(c, estimate.warp)));
    current = stages.size();
  } catch (const Error& e) {
    stages[current].status = "failed";
    stages[current].error = e.what();
    err << "error: stage '" << stages[current].stage << "' failed: " << e.what() << "\n";
    code = kExitUsage;
  }

  json artifacts = json::array();
  for (const auto& s : stages) {
    json entry = {{"stage", s.stage}, {"path", s.file}, {"status", s.status}};
    if (!s.sha256.empty()) entry["sha256"] = s.sha256;
    if (!s.error.empty()) entry["error"] = s.error;
    artifacts.push_back(entry);
  }
  json manifest = {{"artifacts", artifacts}, {"seed", c.seed}};
  if (!config_path.empty()) manifest["config_sha256"] = sha256_hex(read_text_file(config_path));
  write_text_file(dir / "manifest.json", canonicalize_json(manifest.dump()));

  for (const auto& s : stages) {
    out << s.stage << ": " << s.status;
    if (!s.sha256.empty()) out << "  " << s.sha256.substr(0, 16) << "  " << (dir / s.file).string();
    out << "\n";
  }
  return code;
}

}  // namespace

void apply_config_file(PipelineConfig& config, const fs::path& path) {
  const json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError("config '" + path.string() + "' is not a JSON object");
  }
  const fs::path base = path.parent_path();
  const auto as_path = [&](const json& v) {
    const fs::path p = v.get<std::string>();
    return (p.is_absolute() || base.empty() ? p : base / p).string();
  };
  const auto as_range = [](const json& v, const char* what) {
    if (v.is_string()) return parse_range(v.get<std::string>(), what);
    if (v.is_array() && v.size() == 2) return std::pair{v[0].get<double>(), v[1].get<double>()};
    throw InvalidArgument(std::string(what) + " must be \"min:max\" or [min, max]");
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "corpus") config.corpus = as_path(v);
      else if (key == "column_map") config.column_map = as_path(v);
      else if (key == "scale") config.scale = as_path(v);
      else if (key == "out") config.out = as_path(v);
      else if (key == "vowels") {
        config.vowels = v.is_string() ? split(v.get<std::string>(), ',')
                                      : v.get<std::vector<std::string>>();
      }
      else if (key == "partition") config.partition = v.get<std::string>();
      else if (key == "reference") config.reference = v.get<std::string>();
      else if (key == "max_iters") config.max_iters = v.get<int>();
      else if (key == "tol") config.tol = v.get<double>();
      else if (key == "vowel") config.vowel = v.get<std::string>();
      else if (key == "warp") config.warp = v.get<std::string>();
      else if (key == "b_range") config.b_range = as_range(v, "b_range");
      else if (key == "calibrate") config.calibrate = v.get<bool>();
      else if (key == "grid_points") config.grid_points = v.get<int>();
      else if (key == "grid_range") config.grid_range = as_range(v, "grid_range");
      else if (key == "extend") config.extend = v.get<bool>();
      else if (key == "seed") config.seed = v.get<std::uint64_t>();
      else throw InvalidArgument("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError("config '" + path.string() + "': " + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimate a universal speech frequency scale from formant data", "speechscale"};
  app.require_subcommand(1);

  PipelineConfig config;
  SynthOptions synth;
  std::string vowels;
  std::string b_range;
  std::string grid_range;
  std::string config_path;
  bool no_calibrate = false;

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic two-tube speaker population");
  synth_cmd->add_option("--speakers", synth.speakers, "Number of speakers (>= 2)");
  synth_cmd->add_option("--oral-range", synth.oral_range, "Oral cavity length range min:max (m)");
  synth_cmd->add_option("--pharynx-length", synth.pharynx_length, "Pharynx length (m)");
  synth_cmd->add_option("--area-ratio", synth.area_ratio, "Oral / pharyngeal area ratio");
  synth_cmd->add_option("--speed-of-sound", synth.speed_of_sound, "m/s");
  synth_cmd->add_option("--formants", synth.formants, "Formants per speaker");
  synth_cmd->add_option("--vowel", synth.vowel, "Vowel label");
  synth_cmd->add_option("--betas", synth.betas,
                        "Band exponents b1,b2,...: scale formant k by exp(beta_k * c) instead of "
                        "varying the tube");
  synth_cmd->add_option("--base-formants", synth.base_formants,
                        "Reference formants for --betas (default: mid-range tube)");
  synth_cmd->add_option("--log-factor-range", synth.log_factor_range,
                        "Speaker log factor range min:max for --betas");
  synth_cmd->add_option("--noise", synth.noise, "Gaussian log-frequency noise (nepers)");
  synth_cmd->add_option("--seed", config.seed, "Random seed");
  synth_cmd->add_option("--out", config.out, "Output CSV (default synth.csv)");

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the piecewise-log speech scale");
  add_corpus_options(*estimate_cmd, config, vowels);
  estimate_cmd->add_option("--partition", config.partition, "per-formant | explicit:b0,b1,...");
  estimate_cmd->add_option("--reference", config.reference, "grand-mean | speaker id");
  estimate_cmd->add_option("--max-iters", config.max_iters, "ALS iteration cap");
  estimate_cmd->add_option("--tol", config.tol, "ALS relative objective tolerance");
  estimate_cmd->add_option("--seed", config.seed, "Recorded for reproducibility");
  estimate_cmd->add_option("--out", config.out, "Output JSON (default scale.json)");
  estimate_cmd->add_option("--config", config_path, "JSON config; its keys override flags");

  auto* align_cmd = app.add_subcommand("align", "Align one vowel's formants across speakers");
  add_corpus_options(*align_cmd, config, vowels);
  align_cmd->add_option("--vowel", config.vowel, "Vowel to align (default: first selected)");
  align_cmd->add_option("--scale", config.scale, "Scale estimate or warp JSON");
  align_cmd->add_option("--warp", config.warp, "scale | log | demo | identity");
  align_cmd->add_flag("--extend", config.extend, "Extend the end slopes beyond the warp bands");
  align_cmd->add_option("--out", config.out, "Output JSON (default alignment.json)");
  align_cmd->add_option("--config", config_path, "JSON config; its keys override flags");

  auto* fit_cmd = app.add_subcommand("fit-mel", "Fit the mel functional form to a scale");
  fit_cmd->add_option("--scale", config.scale, "Scale estimate or warp JSON");
  fit_cmd->add_option("--b-range", b_range, "Corner frequency search range min:max (Hz)");
  fit_cmd->add_option("--grid-points", config.grid_points, "Log-spaced sample count");
  fit_cmd->add_option("--grid-range", grid_range, "Sample range min:max (default: warp domain)");
  fit_cmd->add_flag("--no-calibrate", no_calibrate, "Fit the raw scale without an offset");
  fit_cmd->add_flag("--extend", config.extend, "Extend the end slopes beyond the warp bands");
  fit_cmd->add_option("--out", config.out, "Output JSON (default melfit.json)");
  fit_cmd->add_option("--config", config_path, "JSON config; its keys override flags");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run corpus -> estimate -> align -> fit-mel");
  add_corpus_options(*pipeline_cmd, config, vowels);
  pipeline_cmd->add_option("--partition", config.partition, "per-formant | explicit:b0,b1,...");
  pipeline_cmd->add_option("--reference", config.reference, "grand-mean | speaker id");
  pipeline_cmd->add_option("--vowel", config.vowel, "Vowel to align");
  pipeline_cmd->add_option("--b-range", b_range, "Corner frequency search range min:max (Hz)");
  pipeline_cmd->add_flag("--extend", config.extend, "Extend the end slopes beyond the warp bands");
  pipeline_cmd->add_option("--seed", config.seed, "Recorded in the manifest");
  pipeline_cmd->add_option("--out", config.out, "Output directory");
  pipeline_cmd->add_option("--config", config_path, "JSON config; its keys override flags");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!vowels.empty()) config.vowels = split(vowels, ',');
    if (!b_range.empty()) config.b_range = parse_range(b_range, "--b-range");
    if (!grid_range.empty()) config.grid_range = parse_range(grid_range, "--grid-range");
    if (no_calibrate) config.calibrate = false;
    if (!config_path.empty()) apply_config_file(config, config_path);

    if (synth_cmd->parsed()) return cmd_synth(synth, config, out);

    if (estimate_cmd->parsed()) {
      const Corpus corpus = load(config);
      const ScaleEstimate estimate = run_estimate(config, corpus);
      write_bundle(estimate, output_path(config, "scale.json"));
      print_estimate(out, estimate);
      return kExitOk;
    }

    if (align_cmd->parsed()) {
      const Corpus corpus = load(config);
      const ResolvedWarp warp = resolve_warp(config);
      const AlignmentResult result = run_align(config, corpus, warp.warp);
      write_bundle(result, warp.ref, output_path(config, "alignment.json"));
      print_alignment(out, result);
      return kExitOk;
    }

    if (fit_cmd->parsed()) {
      if (config.scale.empty()) throw InvalidArgument("--scale is required");
      const MelReport report = run_fit_mel(config, load_warp(config.scale));
      write_bundle(report, output_path(config, "melfit.json"));
      print_mel(out, report);
      return kExitOk;
    }

    if (pipeline_cmd->parsed()) return cmd_pipeline(config, config_path, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace speechscale::cli
