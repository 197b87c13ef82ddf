#ifndef GARLAND_SVG_HPP
#define GARLAND_SVG_HPP

#include <complex>
#include <string>
#include <vector>

namespace garland::svg {

/// Minimal SVG canvas for phase portraits and atlases.  Plain data renderer:
/// no timestamps or metadata, so output is byte-deterministic.
class Canvas {
public:
    Canvas(double x_min, double x_max, double y_min, double y_max, int width = 720,
           int height = 720);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width = 1.0);
    void circle(double x, double y, double radius_px, const std::string& color, bool filled);
    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    std::string render() const;

private:
    double tx(double x) const;
    double ty(double y) const;
    double x_min_, x_max_, y_min_, y_max_;
    int width_, height_;
    std::vector<std::string> elements_;
};

/// Color table shared by the atlas and portrait renderers.
const char* region_color(int region_index);
const char* kind_color(const std::string& kind);

} // namespace garland::svg

#endif
