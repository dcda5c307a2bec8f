// gemstop: validate, analyze, synth and report subcommands.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gemstop/cli.hpp"
#include "gemstop/config.hpp"

namespace {

// Every run-config key can also be given as a flag; flags win over --config.
const std::vector<std::string> kValueKeys{"window_s",      "hop_s",     "rise_factor",    "rel_floor",
                                          "min_gap_s",     "min_offset_s", "closure_run_s", "abs_floor",
                                          "edge_fraction", "ratio_threshold", "p_star",     "stop_only",
                                          "jobs",          "seed"};

std::string dashed(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stop-consonant gemination measurement and statistics"};
  app.require_subcommand(1);

  std::string config_path;
  bool paper_df = false;
  std::vector<std::optional<std::string>> overrides(kValueKeys.size());
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_flag("--paper-df,--paper_df", paper_df, "also print N - 1 degrees of freedom");
  for (std::size_t i = 0; i < kValueKeys.size(); ++i) {
    const auto& k = kValueKeys[i];
    const auto names = k.find('_') == std::string::npos ? "--" + k : "--" + dashed(k) + ",--" + k;
    app.add_option_function<std::string>(names, [&overrides, i](const std::string& v) { overrides[i] = v; },
                                         "overrides '" + k + "'");
  }

  auto* validate = app.add_subcommand("validate", "check annotation/audio pairs");
  std::string v_audio, v_ann, v_out;
  validate->add_option("audio_dir", v_audio)->required();
  validate->add_option("annotation_dir", v_ann)->required();
  validate->add_option("--out", v_out, "directory for per-pair reports");

  auto* analyze = app.add_subcommand("analyze", "measure every annotated stop into a token CSV");
  std::string a_audio, a_ann, a_out;
  analyze->add_option("audio_dir", a_audio)->required();
  analyze->add_option("annotation_dir", a_ann)->required();
  analyze->add_option("-o,--out", a_out, "token CSV path")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string s_spec, s_out;
  std::optional<std::size_t> s_tokens;
  synth->add_option("spec", s_spec, "corpus spec file (key=value)");
  synth->add_option("-o,--out", s_out, "output directory")->required();
  synth->add_option("--tokens", s_tokens, "token count");

  auto* report = app.add_subcommand("report", "summary tables and ANOVA battery from a token CSV");
  std::string r_csv, r_out;
  report->add_option("tokens_csv", r_csv)->required();
  report->add_option("-o,--out", r_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  gemstop::RunConfig config;
  try {
    auto kv = config_path.empty() ? gemstop::KeyValues{} : gemstop::KeyValues::load(config_path);
    for (std::size_t i = 0; i < kValueKeys.size(); ++i) {
      if (overrides[i]) kv.set(kValueKeys[i], *overrides[i]);
    }
    if (paper_df) kv.set("paper_df", "1");
    config = gemstop::run_config_from(kv);
  } catch (const gemstop::Error& e) {
    std::cerr << (config_path.empty() ? std::string("options") : config_path) << ": " << e.what() << '\n';
    return gemstop::cli::exit_code(e);
  }

  namespace cli = gemstop::cli;
  if (*validate) {
    std::optional<std::filesystem::path> out;
    if (!v_out.empty()) out = v_out;
    return cli::cmd_validate(v_audio, v_ann, out, config, std::cout, std::cerr);
  }
  if (*analyze) return cli::cmd_analyze(a_audio, a_ann, a_out, config, std::cerr);
  if (*synth) {
    std::optional<std::filesystem::path> spec;
    if (!s_spec.empty()) spec = s_spec;
    return cli::cmd_synth(spec, s_tokens, s_out, config, std::cout, std::cerr);
  }
  return cli::cmd_report(r_csv, r_out, config, std::cerr);
}
