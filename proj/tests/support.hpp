#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hatepipe/cli.hpp"
#include "hatepipe/corpus.hpp"
#include "hatepipe/io.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return HATEPIPE_TEST_DATA; }

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hatepipe-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    hatepipe::io::write_file(p, contents);
    return p;
  }

 private:
  std::filesystem::path path_;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"hatepipe"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = hatepipe::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline hatepipe::Document doc(std::string id, std::string text, std::optional<int> label = std::nullopt) {
  hatepipe::Document d;
  d.id = std::move(id);
  d.raw_text = std::move(text);
  d.label = label;
  return d;
}

// Documents whose tokens are the whitespace-split text.
inline std::vector<hatepipe::Document> token_docs(std::initializer_list<std::string> texts) {
  std::vector<hatepipe::Document> docs;
  int i = 0;
  for (const auto& t : texts) {
    auto d = doc("d" + std::to_string(i++), t);
    std::istringstream in(t);
    std::string tok;
    while (in >> tok) d.tokens.push_back(tok);
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace testing
