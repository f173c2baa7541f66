#include "ssinfer/voles_data.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ssinfer/csv.hpp"
#include "ssinfer/errors.hpp"

namespace ssinfer {

Eigen::VectorXd ObservedSeries::obs_times() const {
    Eigen::VectorXd times(size());
    for (long i = 0; i < size(); ++i)
        times[i] = years[i] + (seasons[i] == Season::Spring ? 0.45 : 0.70);
    return times;
}

double preprocess_index(double raw_index) {
    return std::floor(10.0 * raw_index + 0.5);
}

namespace {

std::string trimmed(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

ObservedSeries load_voles_csv(std::istream& in) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty voles file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line) != "year,season,index")
        throw ParseError("expected header 'year,season,index'", line_no);

    ObservedSeries series;
    std::vector<double> raw, counts;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);

        int year = 0;
        try {
            size_t used = 0;
            year = std::stoi(trimmed(fields[0]), &used);
            if (used != trimmed(fields[0]).size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("bad year '" + fields[0] + "'", line_no);
        }

        Season season;
        const std::string season_str = trimmed(fields[1]);
        if (season_str == "spring") season = Season::Spring;
        else if (season_str == "autumn") season = Season::Autumn;
        else throw ParseError("bad season '" + fields[1] + "' (want spring|autumn)", line_no);

        double index = 0.0;
        try {
            size_t used = 0;
            index = std::stod(trimmed(fields[2]), &used);
            if (used != trimmed(fields[2]).size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("bad index '" + fields[2] + "'", line_no);
        }
        if (!(index >= 0.0)) throw ParseError("negative index", line_no);

        if (!series.years.empty()) {
            const int py = series.years.back();
            const Season ps = series.seasons.back();
            const bool ordered =
                year > py || (year == py && ps == Season::Spring && season == Season::Autumn);
            if (!ordered) throw ParseError("rows not ordered by (year, season)", line_no);
        }
        series.years.push_back(year);
        series.seasons.push_back(season);
        raw.push_back(index);
        counts.push_back(preprocess_index(index));
    }
    if (raw.empty()) throw ParseError("no data rows", line_no);
    series.raw_index = Eigen::Map<Eigen::VectorXd>(raw.data(), static_cast<long>(raw.size()));
    series.counts =
        Eigen::Map<Eigen::VectorXd>(counts.data(), static_cast<long>(counts.size()));
    return series;
}

ObservedSeries load_voles_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open voles file: " + path);
    return load_voles_csv(in);
}

}  // namespace ssinfer
