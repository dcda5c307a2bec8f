#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "gemstop/gemination.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gemstop_test_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline gemstop::Token single_token(std::string speaker, gemstop::GemType type, double Vd, double Cld, double Bd,
                                   double power = 1e-3) {
  using namespace gemstop;
  const double cl[] = {Cld};
  const double b[] = {Bd};
  const auto rec = make_record(Vd, cl, b);
  return build_token(rec, {power}, classify_gemination(rec), {std::move(speaker), "1", "1", "atto", "tt", type});
}

inline gemstop::Token double_token(std::string speaker, gemstop::GemType type, double Vd, double Cl1d, double B1d,
                                   double Cl2d, double B2d, double p1 = 1e-3, double p2 = 4e-3) {
  using namespace gemstop;
  const double cl[] = {Cl1d, Cl2d};
  const double b[] = {B1d, B2d};
  const auto rec = make_record(Vd, cl, b);
  return build_token(rec, {p1, p2}, classify_gemination(rec), {std::move(speaker), "1", "1", "atto", "tt", type});
}

}  // namespace testing
