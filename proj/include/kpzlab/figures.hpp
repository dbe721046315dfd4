#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kpzlab/geodesy.hpp"
#include "kpzlab/interface.hpp"

namespace kpzlab {

struct Series {
    std::string name;
    std::vector<double> x, y;  // NaN breaks the line
    std::string color = "#1f77b4";
    double width = 1.5;
    bool dashed = false;
    bool markers = false;
};

// Series are drawn in order, so later series sit on top.
struct Plot {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    std::vector<std::string> notes;
    int width = 640, height = 480;

    bool empty() const;
    std::string to_svg() const;
    // Long format: series,x,y.
    std::string to_csv() const;
};

// Writes <name>.svg and <name>.csv into dir and returns both paths.
std::vector<std::string> emit_plot(const Plot& plot, const std::filesystem::path& dir, const std::string& name);

// Layers bottom to top: rays, tau-, tau+. Position on the horizontal axis, time upward.
Plot interface_plot(const ScalingParams& params, const InterfaceTrace& trace,
                    const std::vector<GeodesicRay>& rays = {});

// The trace with the split and re-meet levels of each bubble marked.
Plot bubble_plot(const ScalingParams& params, const InterfaceTrace& trace, const std::vector<Bubble>& bubbles);

Plot profile_plot(const std::string& title, const std::vector<double>& x,
                  const std::vector<std::pair<std::string, std::vector<double>>>& ys);

}  // namespace kpzlab
