#include "ssinfer/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssinfer {

std::string format_double(double v) {
    // Shortest representation that parses back to the same double, so that
    // rerunning an experiment reproduces files byte for byte.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
    if (header.size() != static_cast<size_t>(rows.cols()))
        throw std::invalid_argument("write_csv: header/column mismatch");
    for (size_t j = 0; j < header.size(); ++j) {
        if (j) out << ',';
        out << header[j];
    }
    out << '\n';
    for (long i = 0; i < rows.rows(); ++i) {
        for (long j = 0; j < rows.cols(); ++j) {
            if (j) out << ',';
            out << format_double(rows(i, j));
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const Eigen::MatrixXd& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(out, header, rows);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);

    std::vector<double> values;
    long rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("ragged csv row in " + path);
        for (const auto& f : fields) values.push_back(std::strtod(f.c_str(), nullptr));
        ++rows;
    }
    Eigen::MatrixXd m(rows, static_cast<long>(header.size()));
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < m.cols(); ++j) m(i, j) = values[i * m.cols() + j];
    return {header, m};
}

Eigen::VectorXd csv_column(const std::pair<std::vector<std::string>, Eigen::MatrixXd>& table,
                           const std::string& name) {
    for (size_t j = 0; j < table.first.size(); ++j)
        if (table.first[j] == name) return table.second.col(static_cast<long>(j));
    throw std::runtime_error("csv column not found: " + name);
}

}  // namespace ssinfer
