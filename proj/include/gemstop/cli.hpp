#pragma once

// Batch subcommands over corpus directories. Each returns a process exit
// status: 0 success, 1 data error, 2 I/O error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gemstop/analysis.hpp"
#include "gemstop/annotation.hpp"
#include "gemstop/config.hpp"
#include "gemstop/error.hpp"
#include "gemstop/gemination.hpp"
#include "gemstop/report.hpp"
#include "gemstop/synth.hpp"
#include "gemstop/validation.hpp"
#include "gemstop/wav.hpp"

namespace gemstop::cli {

namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kDataError = 1, kIoError = 2 };

inline int exit_code(const Error& e) { return e.code() == ErrorCode::IoError ? kIoError : kDataError; }

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path.string() + "'");
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
}

struct FilePair {
  std::string stem;
  std::optional<fs::path> audio;
  std::optional<fs::path> annotation;
};

/// Matches <stem>.wav in `audio_dir` with <stem>.ann in `annotation_dir`,
/// sorted by stem.
inline std::vector<FilePair> pair_files(const fs::path& audio_dir, const fs::path& annotation_dir) {
  std::map<std::string, FilePair> pairs;
  auto scan = [&](const fs::path& dir, const char* ext, std::optional<fs::path> FilePair::*slot) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "'" + dir.string() + "' is not a directory");
    for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
      if (!it->is_regular_file() || it->path().extension() != ext) continue;
      auto& p = pairs[it->path().stem().string()];
      p.stem = it->path().stem().string();
      p.*slot = it->path();
    }
    if (ec) throw Error(ErrorCode::IoError, "cannot list '" + dir.string() + "': " + ec.message());
  };
  scan(audio_dir, ".wav", &FilePair::audio);
  scan(annotation_dir, ".ann", &FilePair::annotation);
  std::vector<FilePair> out;
  for (auto& [stem, p] : pairs) out.push_back(std::move(p));
  return out;
}

struct LoadedPair {
  std::optional<Waveform> wave;
  std::optional<AnnotationSet> annotations;
  ValidationReport problems;  // pairing and load failures
};

/// Loads both files. Data problems land in `problems`; I/O failures throw.
inline LoadedPair load_pair(const FilePair& p) {
  LoadedPair out;
  auto problem = [&](std::string code, std::string message, std::string location) {
    out.problems.errors.push_back({std::move(code), std::move(message), std::move(location)});
  };
  if (!p.audio) problem("PAIRING_ERROR", "no audio file for this annotation", p.annotation->filename().string());
  if (!p.annotation) problem("PAIRING_ERROR", "no annotation file for this audio", p.audio->filename().string());
  if (p.audio) {
    try {
      out.wave = load_waveform(*p.audio);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      problem(std::string(to_string(e.code())), e.what(), p.audio->filename().string());
    }
  }
  if (p.annotation) {
    try {
      out.annotations = parse_annotations(*p.annotation);
    } catch (const ParseError& e) {
      problem(std::string(to_string(e.code())), e.what(),
              p.annotation->filename().string() + ":" + std::to_string(e.line()));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      problem(std::string(to_string(e.code())), e.what(), p.annotation->filename().string());
    }
  }
  return out;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const fs::path& audio_dir, const fs::path& annotation_dir,
                        const std::optional<fs::path>& out_dir, const RunConfig& config, std::ostream& out,
                        std::ostream& err) {
  try {
    const auto pairs = pair_files(audio_dir, annotation_dir);
    if (out_dir) ensure_dir(*out_dir);
    ValidationOptions vopt;
    vopt.stop_only = config.stop_only;
    bool failed = false;
    for (const auto& p : pairs) {
      auto loaded = load_pair(p);
      ValidationReport report = loaded.problems;
      if (loaded.wave && loaded.annotations) {
        auto more = validate_annotations(*loaded.annotations, *loaded.wave, vopt);
        const std::string file = p.annotation->filename().string();
        for (auto* list : {&more.errors, &more.warnings}) {
          for (auto& issue : *list) issue.location = file + ": " + issue.location;
        }
        report.errors.insert(report.errors.end(), more.errors.begin(), more.errors.end());
        report.warnings.insert(report.warnings.end(), more.warnings.begin(), more.warnings.end());
      }
      failed = failed || !report.ok();
      const auto body = report.to_text();
      out << "== " << p.stem << " ==\n" << body;
      if (out_dir) write_file(*out_dir / (p.stem + ".validation.txt"), body);
    }
    out << pairs.size() << " pair(s), " << (failed ? "errors found" : "all valid") << '\n';
    return failed ? kDataError : kOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e);
  }
}

inline int cmd_analyze(const fs::path& audio_dir, const fs::path& annotation_dir, const fs::path& out_csv,
                       const RunConfig& config, std::ostream& err) {
  try {
    const auto pairs = pair_files(audio_dir, annotation_dir);
    AnalysisOptions opt;
    opt.detector = config.detector;
    opt.ratio_threshold = config.ratio_threshold;

    std::vector<std::vector<Token>> per_file(pairs.size());
    std::vector<std::string> problems(pairs.size());
    std::vector<std::string> io_failures(pairs.size());
    parallel_for(pairs.size(), config.jobs, [&](std::size_t i) {
      try {
        auto loaded = load_pair(pairs[i]);
        if (!loaded.problems.ok()) {
          problems[i] = loaded.problems.to_text();
          return;
        }
        per_file[i] = analyze_recording(*loaded.annotations, *loaded.wave, opt);
      } catch (const std::exception& e) {
        io_failures[i] = e.what();
      }
    });
    for (const auto& f : io_failures) {
      if (!f.empty()) throw Error(ErrorCode::IoError, f);
    }

    std::vector<Token> tokens;
    for (auto& v : per_file) {
      for (auto& t : v) tokens.push_back(std::move(t));
    }
    sort_tokens(tokens);
    write_file(out_csv, tokens_csv(tokens));

    bool skipped = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (problems[i].empty()) continue;
      skipped = true;
      err << "skipped " << pairs[i].stem << ":\n" << problems[i];
    }
    return skipped ? kDataError : kOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e);
  }
}

inline int cmd_synth(const std::optional<fs::path>& spec_file, std::optional<std::size_t> tokens,
                     const fs::path& out_dir, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    CorpusSpec spec = spec_file ? CorpusSpec::from(KeyValues::load(*spec_file)) : CorpusSpec::from(KeyValues{});
    if (tokens) spec.tokens = *tokens;
    const auto summary = generate_corpus(spec, config.seed, out_dir, config.jobs);
    out << summary.tokens << " token(s) written to " << out_dir.string() << '\n';
    for (std::size_t i = 0; i < spec.classes.size(); ++i) {
      if (summary.class_counts[i]) out << "  " << spec.classes[i].name << ": " << summary.class_counts[i] << '\n';
    }
    return kOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e);
  }
}

inline int cmd_report(const fs::path& tokens_csv_path, const fs::path& out_dir, const RunConfig& config,
                      std::ostream& err) {
  try {
    std::ifstream in(tokens_csv_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + tokens_csv_path.string() + "'");
    auto tokens = read_tokens_csv(in);
    ensure_dir(out_dir);
    const auto r = report::build_report(tokens, {config.p_star, config.paper_df});
    write_file(out_dir / "report.txt", report::render_text(r));
    write_file(out_dir / "report.json", report::render_json(r));
    for (const auto& [name, content] : report::plot_series(tokens)) write_file(out_dir / name, content);
    return kOk;
  } catch (const Error& e) {
    err << tokens_csv_path.string() << ": " << e.what() << '\n';
    return exit_code(e);
  }
}

}  // namespace gemstop::cli
