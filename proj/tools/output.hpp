// Artifact helpers: number formatting, hashing, CSV files and minimal SVG plots.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace su2dual::cli {

// Shortest round-trip form, so equal doubles always print the same way.
std::string num(double x);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& p);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& row(std::vector<std::string> cells);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel, ylabel;
    bool logx = true;
    bool logy = false;
};

// A line chart with axes, decade ticks and a legend. Non-finite or (for log axes)
// non-positive points are dropped.
std::string svg_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace su2dual::cli
