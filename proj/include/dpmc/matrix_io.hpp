//
// Copyright 2026 The dpmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Matrix file format: one header line "# rows=<m> cols=<n>" followed by m
// lines of n comma-separated decimal floats. Values are written with %.17g,
// which round-trips doubles exactly and keeps outputs byte-stable.

#ifndef DPMC_MATRIX_IO_HPP_
#define DPMC_MATRIX_IO_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dpmc/errors.hpp"
#include "dpmc/matnorm.hpp"

namespace dpmc {

inline void write_matrix_csv(std::ostream& out, const RealMatrix& m) {
  out << "# rows=" << m.rows() << " cols=" << m.cols() << "\n";
  char buffer[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", m(i, j));
      if (j > 0) out << ",";
      out << buffer;
    }
    out << "\n";
  }
}

inline void write_matrix_csv_file(const std::string& path, const RealMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_matrix_csv(out, m);
  if (!out) throw ParseError("write failed: " + path);
}

inline RealMatrix read_matrix_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("matrix file: empty input");
  int rows = 0;
  int cols = 0;
  if (std::sscanf(header.c_str(), "# rows=%d cols=%d", &rows, &cols) != 2 ||
      rows < 1 || cols < 1) {
    throw ParseError("matrix file: bad header '" + header + "'");
  }
  RealMatrix m(rows, cols);
  std::string line;
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("matrix file: fewer rows than the header promised");
    }
    std::stringstream row(line);
    std::string cell;
    for (int j = 0; j < cols; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw ParseError("matrix file: short row " + std::to_string(i));
      }
      try {
        std::size_t used = 0;
        m(i, j) = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("matrix file: bad value '" + cell + "'");
      }
      if (!std::isfinite(m(i, j))) {
        throw ParseError("matrix file: non-finite value in row " + std::to_string(i));
      }
    }
    if (std::getline(row, cell, ',')) {
      throw ParseError("matrix file: extra values in row " + std::to_string(i));
    }
  }
  return m;
}

inline RealMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open for reading: " + path);
  return read_matrix_csv(in);
}

}  // namespace dpmc

#endif  // DPMC_MATRIX_IO_HPP_
