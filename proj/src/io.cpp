// SPDX-License-Identifier: Apache-2.0
#include "lmp/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace lmp::io {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
T read_value(std::istream& in, const char* what) {
    T v;
    if (!(in >> v)) throw std::runtime_error(std::string("parse error: expected ") + what);
    return v;
}

}  // namespace

void write_matrix(std::ostream& out, const SensingMatrix& a) {
    const auto& p = a.partition();
    out << a.rows() << ' ' << p.total_len() << ' ' << p.num_blocks() << '\n';
    for (int i = 0; i < p.num_blocks(); ++i)
        out << p.block_size(i) << (i + 1 < p.num_blocks() ? ' ' : '\n');
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < p.total_len(); ++c) {
            const cxd v = a.entries()(r, c);
            out << fmt17(v.real()) << ' ' << fmt17(v.imag())
                << (c + 1 < p.total_len() ? " " : "\n");
        }
    }
}

SensingMatrix read_matrix(std::istream& in, double rank_tolerance) {
    const int m = read_value<int>(in, "row count");
    const int n = read_value<int>(in, "column count");
    const int b = read_value<int>(in, "block count");
    if (m < 1 || n < 1 || b < 2) throw std::runtime_error("parse error: bad matrix header");
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i) sizes.push_back(read_value<int>(in, "block size"));
    CMat entries(m, n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
            const double re = read_value<double>(in, "matrix entry");
            const double im = read_value<double>(in, "matrix entry");
            entries(r, c) = cxd(re, im);
        }
    return SensingMatrix(std::move(entries), BlockPartition(n, std::move(sizes)),
                         rank_tolerance);
}

void write_dictionary(std::ostream& out, const WaveletDictionary& dict) {
    out << dict.size() << ' ' << dict.n << '\n';
    for (const auto& p : dict.params)
        out << p.tau << ' ' << p.rho << ' ' << p.half_period << '\n';
}

WaveletDictionary read_dictionary(std::istream& in) {
    const int l = read_value<int>(in, "dictionary size");
    const int n = read_value<int>(in, "signal length");
    if (l < 1 || n < 1) throw std::runtime_error("parse error: bad dictionary header");
    WaveletDictionary dict;
    dict.n = n;
    dict.rows.resize(l, n);
    for (int row = 0; row < l; ++row) {
        WaveletParams p;
        p.tau = read_value<int>(in, "tau");
        p.rho = read_value<int>(in, "rho");
        p.half_period = read_value<int>(in, "half period");
        const std::vector<int> w = haar_wavelet(p, n);
        for (int k = 0; k < n; ++k) dict.rows(row, k) = w[static_cast<std::size_t>(k)];
        dict.params.push_back(p);
    }
    return dict;
}

void write_selection(std::ostream& out, const std::vector<int>& chosen) {
    out << chosen.size() << '\n';
    for (int idx : chosen) out << idx << '\n';
}

std::vector<int> read_selection(std::istream& in) {
    const int m = read_value<int>(in, "selection size");
    if (m < 1) throw std::runtime_error("parse error: bad selection header");
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) chosen.push_back(read_value<int>(in, "row index"));
    return chosen;
}

void write_results(std::ostream& out, const rfsim::ErrorCurve& curve) {
    out << "method,snr_db,m,trials,errors,error_rate\n";
    char rate[16];
    for (const auto& c : curve.cells) {
        std::snprintf(rate, sizeof(rate), "%.6f", c.error_rate());
        out << c.method << ',' << c.snr_db << ',' << c.m << ',' << c.trials << ','
            << c.errors << ',' << rate << '\n';
    }
}

rfsim::ErrorCurve read_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("method,", 0) != 0)
        throw std::runtime_error("parse error: missing results header");
    rfsim::ErrorCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        rfsim::ErrorCell cell;
        std::string field;
        if (!std::getline(ls, cell.method, ',')) break;
        std::getline(ls, field, ',');
        cell.snr_db = std::stod(field);
        std::getline(ls, field, ',');
        cell.m = std::stoi(field);
        std::getline(ls, field, ',');
        cell.trials = std::stol(field);
        std::getline(ls, field, ',');
        cell.errors = std::stol(field);
        curve.cells.push_back(std::move(cell));
    }
    return curve;
}

void write_instance(std::ostream& out, const GuaranteeInstance& inst) {
    write_matrix(out, inst.matrix);
    const int n = static_cast<int>(inst.signal.size());
    for (int c = 0; c < n; ++c)
        out << fmt17(inst.signal(c).real()) << ' ' << fmt17(inst.signal(c).imag())
            << (c + 1 < n ? " " : "\n");
    out << fmt17(inst.noise_norm) << '\n';
}

GuaranteeInstance read_instance(std::istream& in, double rank_tolerance) {
    SensingMatrix a = read_matrix(in, rank_tolerance);
    CVec x(a.partition().total_len());
    for (int c = 0; c < x.size(); ++c) {
        const double re = read_value<double>(in, "signal entry");
        const double im = read_value<double>(in, "signal entry");
        x(c) = cxd(re, im);
    }
    const double noise_norm = read_value<double>(in, "noise norm");
    return GuaranteeInstance{std::move(a), std::move(x), noise_norm};
}

void save_text(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string load_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace lmp::io
