#include "vfplan/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vfplan {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

FidelityDataset read_dataset_csv(const std::string& path, Fidelity fidelity) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");

    std::string line;
    if (!std::getline(in, line)) fail(path, 1, "missing header");
    const auto header = split_csv_line(line);
    if (header.size() < 2) fail(path, 1, "header must be x1,...,xd,y");
    const int d = static_cast<int>(header.size()) - 1;
    for (int c = 0; c < d; ++c) {
        const std::string expect = "x" + std::to_string(c + 1);
        if (header[c] != expect)
            fail(path, 1, "expected column '" + expect + "', found '" + header[c] + "'");
    }
    if (header.back() != "y") fail(path, 1, "last column must be 'y'");

    std::vector<std::vector<double>> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + 1)
            fail(path, lineno, "expected " + std::to_string(d + 1) + " columns, found " +
                                   std::to_string(cells.size()));
        std::vector<double> row(d + 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                std::size_t pos = 0;
                row[c] = std::stod(cells[c], &pos);
                if (pos != cells[c].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                fail(path, lineno, "cannot parse number '" + cells[c] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path, lineno, "no data rows");

    FidelityDataset data;
    data.fidelity = fidelity;
    data.points.resize(static_cast<long>(rows.size()), d);
    data.values.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < d; ++c) data.points(static_cast<long>(i), c) = rows[i][c];
        data.values[static_cast<long>(i)] = rows[i][d];
    }
    return data;
}

void write_dataset_csv(const std::string& path, const FidelityDataset& data) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    for (int c = 0; c < data.dim(); ++c) out << "x" << c + 1 << ",";
    out << "y\n";
    for (long i = 0; i < data.n(); ++i) {
        for (int c = 0; c < data.dim(); ++c) out << format_g17(data.points(i, c)) << ",";
        out << format_g17(data.values[i]) << "\n";
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
}

}  // namespace vfplan
