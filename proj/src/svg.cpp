#include "garland/svg.hpp"

#include <cstdio>
#include <sstream>

namespace garland::svg {

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}
} // namespace

Canvas::Canvas(double x_min, double x_max, double y_min, double y_max, int width, int height)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width), height_(height) {}

double Canvas::tx(double x) const {
    return (x - x_min_) / (x_max_ - x_min_) * double(width_);
}

double Canvas::ty(double y) const {
    return (y_max_ - y) / (y_max_ - y_min_) * double(height_);
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      double stroke_width) {
    if (pts.size() < 2) return;
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width
       << "\" points=\"";
    for (const auto& [x, y] : pts) os << num(tx(x)) << "," << num(ty(y)) << " ";
    os << "\"/>";
    elements_.push_back(os.str());
}

void Canvas::circle(double x, double y, double radius_px, const std::string& color, bool filled) {
    std::ostringstream os;
    os << "<circle cx=\"" << num(tx(x)) << "\" cy=\"" << num(ty(y)) << "\" r=\"" << radius_px
       << "\" ";
    if (filled)
        os << "fill=\"" << color << "\"";
    else
        os << "fill=\"none\" stroke=\"" << color << "\"";
    os << "/>";
    elements_.push_back(os.str());
}

void Canvas::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    std::ostringstream os;
    os << "<rect x=\"" << num(tx(x0)) << "\" y=\"" << num(ty(y1)) << "\" width=\""
       << num(tx(x1) - tx(x0)) << "\" height=\"" << num(ty(y0) - ty(y1)) << "\" fill=\"" << fill
       << "\"/>";
    elements_.push_back(os.str());
}

std::string Canvas::render() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
       << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const std::string& e : elements_) os << e << "\n";
    os << "</svg>\n";
    return os.str();
}

const char* region_color(int region_index) {
    static const char* colors[] = {"#f2f2f2", "#cfe3f5", "#f5cfcf", "#d5f5cf"};
    return colors[region_index & 3];
}

const char* kind_color(const std::string& kind) {
    if (kind == "saddle") return "#c0392b";
    if (kind == "center") return "#2471a3";
    if (kind == "elliptic") return "#2471a3";
    if (kind == "stable_focus" || kind == "sink") return "#1e8449";
    if (kind == "unstable_focus" || kind == "source") return "#b7950b";
    return "#555555";
}

} // namespace garland::svg
