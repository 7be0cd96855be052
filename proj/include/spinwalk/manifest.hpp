#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "spinwalk/config.hpp"
#include "spinwalk/errors.hpp"
#include "spinwalk/version.hpp"

namespace spinwalk {

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read " + path.string() + " for checksumming");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw regime_error("cannot initialize sha256");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    if (!in) break;
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof(b), "%02x", md[i]);
    hex += b;
  }
  return hex;
}

namespace detail {

inline std::string iso_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Records what a command produced; written atomically as manifest.json.
class RunManifest {
 public:
  RunManifest(std::string command, const RunConfig& config)
      : command_(std::move(command)),
        config_echo_(serialize(config)),
        start_(std::chrono::system_clock::now()) {}

  void add_output(const std::filesystem::path& p) { outputs_.push_back(p); }

  void write(const std::filesystem::path& outdir) {
    const auto end = std::chrono::system_clock::now();
    nlohmann::json j;
    j["tool"] = "spinwalk";
    j["version"] = kVersion;
    j["command"] = command_;
    j["config"] = config_echo_;
    j["started_utc"] = detail::iso_utc(start_);
    j["finished_utc"] = detail::iso_utc(end);
    j["wall_seconds"] = std::chrono::duration<double>(end - start_).count();
    std::map<std::string, std::string> sums;
    for (const auto& p : outputs_)
      sums[p.filename().string()] = sha256_file(p);
    j["outputs"] = sums;

    const auto final_path = outdir / "manifest.json";
    const auto tmp_path = outdir / "manifest.json.tmp";
    {
      std::ofstream os(tmp_path);
      if (!os) throw config_error("cannot open " + tmp_path.string());
      os << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp_path, final_path);
  }

 private:
  std::string command_;
  std::string config_echo_;
  std::chrono::system_clock::time_point start_;
  std::vector<std::filesystem::path> outputs_;
};

}  // namespace spinwalk
