#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace tsbvp::testing {

// Per-test scratch directory under TSBVP_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* base = std::getenv("TSBVP_TEST_TMP");
  std::filesystem::path dir =
      (base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "tsbvp-tests") /
      name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tsbvp::testing
