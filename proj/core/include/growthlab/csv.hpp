#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/experiment.hpp"

namespace growthlab {

/// One aggregate row of the scan schema.
struct CsvRow {
  std::string run_id;
  double p = 0;
  double q = 0;
  double a = 0;
  double gamma = 0;
  int rho = 1;
  int tau = 1;
  std::string r = "1/1";
  int L = 0;
  std::string topology = "torus";
  std::int64_t replicates = 0;
  double p_blue = 0, p_blue_lo = 0, p_blue_hi = 0;
  double p_red = 0, p_empty = 0;
  double mean_frac_blue = 0, mean_frac_red = 0, mean_frac_empty = 0;
  double mean_fixation_time = 0;
  std::int64_t horizon_hits = 0;
};

std::string csv_header();
std::string format_csv_row(const CsvRow& row);

CsvRow csv_row_from_cell(const ScanCell& cell, const ExperimentParams& params,
                         const std::string& run_id);

/// Reconstructs scan cells from previously written rows (counts recovered
/// by rounding), used to resume a partially completed scan.
std::vector<ScanCell> cells_from_csv(const std::vector<CsvRow>& rows);

/// Reads rows from a scan CSV; returns empty if the file does not exist.
std::vector<CsvRow> read_csv(const std::string& path);

/// Writes header plus rows, replacing the file.
void write_csv(const std::string& path, const std::vector<CsvRow>& rows);

}  // namespace growthlab
