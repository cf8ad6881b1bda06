#pragma once

#include <string>
#include <utility>
#include <vector>

#include "velobound/conjugate.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/observables.hpp"
#include "velobound/propagator.hpp"

namespace velobound {

// All report files share the layout
//   # velobound v1
//   # key=value            (metadata, in insertion order)
//   col,col,...            (header)
//   numeric rows           (%.12g)
// Writers are pure functions of their inputs; identical inputs give
// byte-identical files.

std::string format_number(double v);  // %.12g

std::string render_experiment_csv(const ExperimentReport& rep);
std::string render_trace_csv(const EvolutionTrace& trace);
std::string render_spectrum_csv(const std::vector<double>& eigenvalues,
                                const std::vector<std::pair<std::string, std::string>>& metadata);
std::string render_mourre_csv(const MourreReport& rep);
std::string render_relbound_csv(const std::vector<RelativeBoundPoint>& points,
                                const std::vector<std::pair<std::string, std::string>>& metadata);
std::string render_remainder_csv(const RemainderDecay& decay,
                                 const std::vector<std::pair<std::string, std::string>>& metadata);

void write_text_file(const std::string& path, const std::string& bytes);

// Parsed CSV in the shared layout.  Cells are numeric except where a column
// is declared textual by the writer (the mourre "mode" column); those are
// preserved in the labels vector, one entry per row.
struct CsvFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;  // first column when non-numeric, else empty

  int column_index(const std::string& name) const;  // -1 when absent
};

/// Throws std::runtime_error on malformed input (missing magic, short rows,
// non-numeric cells outside the label column).
CsvFile parse_csv(const std::string& bytes);
CsvFile read_csv_file(const std::string& path);

}  // namespace velobound
