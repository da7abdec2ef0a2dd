#ifndef TRSP_TESTS_SUPPORT_HPP
#define TRSP_TESTS_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "trsp/instance.hpp"
#include "trsp/schedule.hpp"

namespace trsp::testing {

// Processing times at most 2 and gaps at most 3.
inline GeneratorRanges micro_ranges() {
  GeneratorRanges r;
  r.mixer = {1, 2};
  r.shaker = {1, 2};
  r.booth = {1, 2};
  r.gaps = {{2, 3}};
  return r;
}

// Micro instance number `i`: N and K cycle through {1, 2} x {1, 2}.
inline Instance micro_instance(std::uint64_t i) {
  const int n = 1 + static_cast<int>(i % 2);
  const int k = 1 + static_cast<int>((i / 2) % 2);
  return generate_instance({n, k}, i, micro_ranges());
}

// The worked two-sample example: mixer, shaker
// and booth times (3,2,1) and (8,5,1), photo gaps 5 and 2.
inline Instance worked_example() {
  InstanceParams p;
  p.id = "worked-example";
  p.num_photos = 2;
  p.proc_times = {{3, 2, 1}, {8, 5, 1}};
  p.photo_gaps = {{5}, {2}};
  return Instance::create(p);
}

inline std::vector<SampleStarts> worked_example_starts() {
  return {{1, 8, {11, 17}}, {6, 15, {21, 24}}};
}

inline Instance single_unit_instance() {
  InstanceParams p;
  p.num_photos = 1;
  p.proc_times = {{1, 1, 1}};
  p.photo_gaps = {{}};
  return Instance::create(p);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("trsp-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace trsp::testing

#endif  // TRSP_TESTS_SUPPORT_HPP
