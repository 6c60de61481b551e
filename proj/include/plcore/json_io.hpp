#pragma once

#include <string>

#include "plcore/theory.hpp"
#include "plcore/typespace.hpp"

namespace plcore {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structure file format:
//   {"sorts":["s"],
//    "relations":[{"name":"P0","arity":["s"]}],
//    "universe":{"s":3},
//    "tables":{"P0":[[0]]}}
// Element ids are 0-based integers; output is byte-stable.
StructPtr load_structure(const std::string& path);
std::string structure_to_json(const FinStructure& s);
void save_structure(const FinStructure& s, const std::string& path);

// Theory file format: {"signature": {...}, "axioms": ["forall x. ~(...)"]}
HuTheory load_theory(const std::string& path);
std::string theory_to_json(const HuTheory& t);
void save_theory(const HuTheory& t, const std::string& path);

// Base file for type spaces: {"base": {"s": [0,1]}}
std::vector<std::vector<char>> load_base(const std::string& path, const FinStructure& u);

// Sigma file for type expansion: [{"formulas": ["P0(x0)", ...]}, ...]
std::vector<std::vector<PosFormula>> load_sigmas(const std::string& path, SigPtr sig);

std::string manifest_to_json(const PatternManifest& m);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace plcore
