#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcull/error.hpp"

namespace relcull {

/// FNV-1a 64-bit content hash, enough to pin inputs in a run manifest.
inline std::string fnv1a_file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for hashing");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return out;
}

/// Every CLI run drops a manifest next to its outputs: the subcommand, the
/// resolved configuration (flags > config file > defaults), and a content
/// hash per input. A run is reproducible from its manifest alone.
inline void write_manifest(const std::string& path, const std::string& command,
                           const nlohmann::json& config, const std::vector<std::string>& inputs,
                           const std::vector<std::string>& outputs) {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& p : inputs) in[p] = fnv1a_file_hash(p);
  nlohmann::json j{{"format", "relcull-manifest"},
                   {"version", 1},
                   {"command", command},
                   {"config", config},
                   {"inputs", std::move(in)},
                   {"outputs", outputs}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace relcull
