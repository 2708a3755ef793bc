#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <zlib.h>

#include "relcull/error.hpp"

namespace relcull {

/// Token -> dense vector table. All vectors share one dimensionality.
struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  bool contains(const std::string& token) const { return vectors.count(token) != 0; }
  std::size_t size() const { return vectors.size(); }
};

struct PhraseVector {
  std::vector<double> values;
  bool all_oov = false;  // set when no token of the phrase was in the table
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_double(std::string_view tok, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(where + ": bad float '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

/// Load a plain-text (or gzip-compressed) word-vector file: one line per
/// token, "token v1 v2 ... vd", space-separated. The dimensionality is taken
/// from expected_dim when given, otherwise inferred from the first line.
/// zlib reads uncompressed files transparently, so one code path covers both.
inline EmbeddingTable load_embeddings(const std::string& path, int expected_dim = 0) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw DataError("cannot open '" + path + "'");

  EmbeddingTable table;
  table.dim = expected_dim;
  std::string line;
  std::vector<char> buf(1 << 16);
  std::size_t line_no = 0;
  bool partial = false;
  auto handle_line = [&](const std::string& l) {
    ++line_no;
    auto toks = detail::split_ws(l);
    if (toks.empty()) return;  // blank line
    const std::string where = path + ": line " + std::to_string(line_no);
    std::string token(toks[0]);
    if (table.dim == 0) {
      table.dim = static_cast<int>(toks.size()) - 1;
      if (table.dim <= 0) throw ParseError(where + ": no vector components");
    }
    if (static_cast<int>(toks.size()) - 1 != table.dim) {
      gzclose(f);
      throw ParseError(where + ": expected " + std::to_string(table.dim) + " floats, found " +
                       std::to_string(toks.size() - 1));
    }
    std::vector<double> vec(static_cast<std::size_t>(table.dim));
    for (int i = 0; i < table.dim; ++i) {
      vec[static_cast<std::size_t>(i)] = detail::parse_double(toks[static_cast<std::size_t>(i) + 1], where);
    }
    if (!table.vectors.emplace(std::move(token), std::move(vec)).second) {
      gzclose(f);
      throw ParseError(where + ": duplicate token '" + std::string(toks[0]) + "'");
    }
  };

  while (gzgets(f, buf.data(), static_cast<int>(buf.size())) != nullptr) {
    std::string_view chunk(buf.data());
    if (!chunk.empty() && chunk.back() == '\n') {
      line.append(chunk.substr(0, chunk.size() - 1));
      partial = false;
      handle_line(line);
      line.clear();
    } else {
      line.append(chunk);
      partial = true;
    }
  }
  if (partial && !line.empty()) handle_line(line);
  gzclose(f);

  if (table.vectors.empty()) {
    table.dim = 0;
    std::fprintf(stderr, "warning: embedding file '%s' is empty\n", path.c_str());
  }
  return table;
}

/// Write a table back to the plain-text format (tokens in sorted order).
inline void write_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::vector<const std::string*> tokens;
  tokens.reserve(table.vectors.size());
  for (const auto& [tok, vec] : table.vectors) tokens.push_back(&tok);
  std::sort(tokens.begin(), tokens.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  char buf[32];
  for (const std::string* tok : tokens) {
    out << *tok;
    for (double v : table.vectors.at(*tok)) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

/// Mean of the vectors of the phrase's in-vocabulary tokens. Out-of-vocabulary
/// tokens are skipped; when every token is unknown the result is the zero
/// vector with all_oov set, so dirty labels degrade instead of failing.
inline PhraseVector phrase_vector(const EmbeddingTable& table, const std::string& phrase) {
  auto toks = detail::split_ws(phrase);
  if (toks.empty()) throw DataError("phrase_vector: empty phrase");
  PhraseVector out;
  out.values.assign(static_cast<std::size_t>(table.dim), 0.0);
  int hits = 0;
  for (const auto& t : toks) {
    auto it = table.vectors.find(std::string(t));
    if (it == table.vectors.end()) continue;
    ++hits;
    for (std::size_t i = 0; i < it->second.size(); ++i) out.values[i] += it->second[i];
  }
  if (hits == 0) {
    out.all_oov = true;
    return out;
  }
  for (auto& v : out.values) v /= static_cast<double>(hits);
  return out;
}

}  // namespace relcull
