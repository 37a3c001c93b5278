#include "camg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

namespace camg {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.precision(17);
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

// Returns the banner tokens and advances past comment lines.
std::vector<std::string> read_banner(std::istream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw Error(path.string() + ": missing %%MatrixMarket banner");
    std::istringstream ss(lower(line));
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.size() < 5 || tokens[1] != "matrix" || tokens[3] != "real" || tokens[4] != "general")
        throw Error(path.string() + ": only 'matrix ... real general' files are supported");
    return tokens;
}

std::string next_data_line(std::istream& in, const std::filesystem::path& path) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        return line;
    }
    throw Error(path.string() + ": unexpected end of file");
}

}  // namespace

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
    auto out = open_out(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.num_rows() << ' ' << a.num_cols() << ' ' << a.nnz() << '\n';
    for (index_t i = 0; i < a.num_rows(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
    }
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
    auto in = open_in(path);
    const auto banner = read_banner(in, path);
    if (banner[2] != "coordinate") throw Error(path.string() + ": expected coordinate format");
    std::istringstream header(next_data_line(in, path));
    index_t rows = 0, cols = 0, nnz = 0;
    if (!(header >> rows >> cols >> nnz)) throw Error(path.string() + ": malformed size line");
    std::vector<Triplet> triplets;
    triplets.reserve(nnz);
    for (index_t k = 0; k < nnz; ++k) {
        std::istringstream entry(next_data_line(in, path));
        index_t i = 0, j = 0;
        double v = 0.0;
        if (!(entry >> i >> j >> v)) throw Error(path.string() + ": malformed entry " + std::to_string(k + 1));
        triplets.push_back({i - 1, j - 1, v});
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

void write_vector(const std::filesystem::path& path, std::span<const double> x) {
    auto out = open_out(path);
    out << "%%MatrixMarket matrix array real general\n";
    out << x.size() << " 1\n";
    for (double v : x) out << v << '\n';
}

std::vector<double> read_vector(const std::filesystem::path& path) {
    auto in = open_in(path);
    const auto banner = read_banner(in, path);
    if (banner[2] != "array") throw Error(path.string() + ": expected array format");
    std::istringstream header(next_data_line(in, path));
    index_t rows = 0, cols = 0;
    if (!(header >> rows >> cols) || cols != 1) throw Error(path.string() + ": expected a single column");
    std::vector<double> x(rows);
    for (index_t i = 0; i < rows; ++i) {
        std::istringstream entry(next_data_line(in, path));
        if (!(entry >> x[i])) throw Error(path.string() + ": malformed value " + std::to_string(i + 1));
    }
    return x;
}

}  // namespace camg
