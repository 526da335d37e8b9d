#include "ipm/grid.hpp"

#include <string>

#include "ipm/error.hpp"

namespace ipm {

Grid::Grid(int n1, int n2, double box_length, double s)
    : n1_(n1), n2_(n2), box_(box_length), s_(s) {
  auto check_n = [](int n, const char* name) {
    if (n < 8 || n % 2 != 0) {
      throw ValidationError(std::string("grid: ") + name + " must be even and >= 8, got " +
                            std::to_string(n));
    }
  };
  check_n(n1, "n1");
  check_n(n2, "n2");
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw ValidationError("grid: box_length must be positive and finite");
  }
  if (!(s > 2.0) || !std::isfinite(s)) {
    throw ValidationError("grid: Sobolev exponent s must exceed 2, got " + std::to_string(s));
  }
}

double wrap_coordinate(double x, double box_length) {
  double r = std::fmod(x, box_length);
  if (r < 0.0) r += box_length;
  if (r >= box_length) r -= box_length;
  return r;
}

Point periodic_difference(Point a, Point b, double box_length) {
  auto fold = [box_length](double d) { return d - box_length * std::round(d / box_length); };
  return {fold(a.x1 - b.x1), fold(a.x2 - b.x2)};
}

}  // namespace ipm
