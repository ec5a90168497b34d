#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "thingc/dsl.hpp"

#ifndef THINGC_CORPUS_DIR
#define THINGC_CORPUS_DIR "tools/corpus"
#endif

inline std::string corpus_path(const std::string& name) {
  return std::string(THINGC_CORPUS_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline thingc::Model load_corpus_model(const std::string& name) {
  auto r = thingc::parse(slurp(corpus_path(name)), name);
  if (!r.model) {
    std::string msg = "corpus model " + name + " failed to parse:";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.str();
    throw std::runtime_error(msg);
  }
  return *r.model;
}
