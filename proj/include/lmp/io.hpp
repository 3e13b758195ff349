// SPDX-License-Identifier: Apache-2.0
//
// Text interchange formats: sensing matrices, wavelet dictionaries, row
// selections, results tables, and guarantee instances.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lmp/blocksparse.hpp"
#include "lmp/nuws.hpp"
#include "lmp/rfsim.hpp"

namespace lmp::io {

// Matrix interchange document: header `M N B`, a line of B block sizes, then
// M rows of 2N decimal numbers (interleaved real/imag). Numbers are written
// with 17 significant digits, so read -> write round-trips are value-exact.
void write_matrix(std::ostream& out, const SensingMatrix& a);
SensingMatrix read_matrix(std::istream& in, double rank_tolerance = 1e-10);

// Dictionary file: header `L N` then L lines of `tau rho half_period`; rows
// are regenerated on read.
void write_dictionary(std::ostream& out, const WaveletDictionary& dict);
WaveletDictionary read_dictionary(std::istream& in);

// Selection file: header `M` then M dictionary row indices, one per line.
void write_selection(std::ostream& out, const std::vector<int>& chosen);
std::vector<int> read_selection(std::istream& in);

// Results table: `method,snr_db,m,trials,errors,error_rate`, one row per
// cell, sorted by (method, m, snr_db), error_rate with 6 fractional digits.
void write_results(std::ostream& out, const rfsim::ErrorCurve& curve);
rfsim::ErrorCurve read_results(std::istream& in);

// Guarantee instance: a matrix document followed by one row of 2N numbers
// (the signal x) and one line holding the noise norm.
struct GuaranteeInstance {
    SensingMatrix matrix;
    CVec signal;
    double noise_norm = 0.0;
};
void write_instance(std::ostream& out, const GuaranteeInstance& inst);
GuaranteeInstance read_instance(std::istream& in, double rank_tolerance = 1e-10);

// File-path convenience wrappers; throw std::runtime_error on I/O failure.
void save_text(const std::string& path, const std::function<void(std::ostream&)>& writer);
std::string load_text(const std::string& path);

}  // namespace lmp::io
