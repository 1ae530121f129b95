#pragma once

// Test-only helpers: scratch directories and independent oracles. Nothing
// here calls into the library implementation paths it is used to check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace test_support {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pehfd_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = {}) const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// O(N^2) DFT magnitudes for bins 0..N/2.
inline std::vector<double> naive_dft_magnitude(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) /
                       static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

// Trapezoid-rule integral of v^2 / R over consecutive intervals of
// `interval` samples.
inline std::vector<double> trapezoid_energy(const std::vector<double>& v, double fs,
                                            std::size_t interval, double r) {
  std::vector<double> out;
  for (std::size_t start = 0; start + interval <= v.size(); start += interval) {
    double acc = 0.0;
    const std::size_t end = std::min(start + interval, v.size() - 1);
    for (std::size_t i = start; i < end; ++i) {
      acc += 0.5 * (v[i] * v[i] + v[i + 1] * v[i + 1]);
    }
    out.push_back(acc / (fs * r));
  }
  return out;
}

// Brute force kNN: full sort of (distance, index), majority vote, ties to
// the label whose first occurrence in the sorted list is earliest.
template <typename Label>
Label brute_force_knn(const std::vector<std::vector<double>>& xs, const std::vector<Label>& ys,
                      const std::vector<double>& q, int k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) d += (xs[i][j] - q[j]) * (xs[i][j] - q[j]);
    all.emplace_back(d, i);
  }
  std::sort(all.begin(), all.end());
  std::vector<Label> order;
  std::map<Label, int> count;
  for (int r = 0; r < k; ++r) {
    const Label l = ys[all[r].second];
    if (count[l]++ == 0) order.push_back(l);
  }
  Label best = order.front();
  for (const auto& l : order) {
    if (count[l] > count[best]) best = l;
  }
  return best;
}

}  // namespace test_support
