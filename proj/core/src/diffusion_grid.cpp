// Copyright 2026 The biosim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "biosim/diffusion_grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "biosim/parallel.hpp"

namespace biosim {

DiffusionGrid::DiffusionGrid(DiffusionSpec spec)
    : spec_(std::move(spec)), out_of_bounds_(std::make_unique<std::atomic<std::size_t>>(0)) {
  if (!(spec_.spacing > 0.0)) throw std::invalid_argument("diffusion grid: spacing must be > 0");
  for (int d : spec_.dims) {
    if (d < 1) throw std::invalid_argument("diffusion grid: every dimension needs >= 1 node");
  }
  if (spec_.diffusion < 0.0 || spec_.decay < 0.0 || !(spec_.dt > 0.0)) {
    throw std::invalid_argument("diffusion grid: D and decay must be >= 0, dt > 0");
  }
  const double s = stability_number();
  if (s > kMaxStabilityNumber) {
    std::ostringstream msg;
    msg << "diffusion grid '" << spec_.name << "': D*dt/h^2 = " << s
        << " violates explicit-Euler stability; maximal admissible value is " << kMaxStabilityNumber;
    throw std::invalid_argument(msg.str());
  }
  const std::size_t n = static_cast<std::size_t>(spec_.dims[0]) * spec_.dims[1] * spec_.dims[2];
  values_.assign(n, 0.0);
  back_.assign(n, 0.0);
}

double DiffusionGrid::stability_number() const {
  return spec_.diffusion * spec_.dt / (spec_.spacing * spec_.spacing);
}

Vec3 DiffusionGrid::node_position(int i, int j, int k) const {
  return spec_.origin + Vec3{i * spec_.spacing, j * spec_.spacing, k * spec_.spacing};
}

Vec3 DiffusionGrid::upper_corner() const {
  return node_position(spec_.dims[0] - 1, spec_.dims[1] - 1, spec_.dims[2] - 1);
}

void DiffusionGrid::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void DiffusionGrid::init_gaussian_axis(int axis, double mean, double sigma, double amplitude) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("init_gaussian_axis: axis must be 0, 1 or 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("init_gaussian_axis: sigma must be > 0");
  for (int k = 0; k < spec_.dims[2]; ++k) {
    for (int j = 0; j < spec_.dims[1]; ++j) {
      for (int i = 0; i < spec_.dims[0]; ++i) {
        const double x = node_position(i, j, k)[axis] - mean;
        values_[index(i, j, k)] = amplitude * std::exp(-(x * x) / (2.0 * sigma * sigma));
      }
    }
  }
}

void DiffusionGrid::step() {
  const int nx = spec_.dims[0];
  const int ny = spec_.dims[1];
  const int nz = spec_.dims[2];
  const double dt = spec_.dt;
  const double coeff = spec_.diffusion / (spec_.spacing * spec_.spacing);
  const double keep = 1.0 - spec_.decay * dt;
  const bool closed = spec_.boundary == Boundary::kClosed;
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * ny;

  detail::parallel_for(static_cast<std::size_t>(nz), spec_.threads, [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = index(i, j, k);
        const double v = values_[c];
        // Missing neighbors: mirror (closed) or zero (absorbing).
        const double ghost = closed ? v : 0.0;
        const double xm = i > 0 ? values_[c - sx] : ghost;
        const double xp = i < nx - 1 ? values_[c + sx] : ghost;
        const double ym = j > 0 ? values_[c - sy] : ghost;
        const double yp = j < ny - 1 ? values_[c + sy] : ghost;
        const double zm = k > 0 ? values_[c - sz] : ghost;
        const double zp = k < nz - 1 ? values_[c + sz] : ghost;
        const double laplacian = (xm - v) + (xp - v) + (ym - v) + (yp - v) + (zm - v) + (zp - v);
        const double next = v * keep + dt * coeff * laplacian;
        back_[c] = next > 0.0 ? next : 0.0;
      }
    }
  });
  values_.swap(back_);
}

void DiffusionGrid::locate(const Vec3& position, std::array<int, 3>& cell,
                           std::array<double, 3>& frac) const {
  bool outside = false;
  for (int a = 0; a < 3; ++a) {
    const int n = spec_.dims[a];
    double t = (position[a] - spec_.origin[a]) / spec_.spacing;
    if (!(t >= 0.0)) {  // also catches NaN
      outside = outside || t < 0.0 || std::isnan(t);
      t = 0.0;
    } else if (t > n - 1) {
      outside = true;
      t = n - 1;
    }
    if (n == 1) {
      cell[a] = 0;
      frac[a] = 0.0;
      continue;
    }
    const int c = std::min(static_cast<int>(t), n - 2);
    cell[a] = c;
    frac[a] = t - c;
  }
  if (outside) out_of_bounds_->fetch_add(1, std::memory_order_relaxed);
}

double DiffusionGrid::concentration_at(const Vec3& position) const {
  std::array<int, 3> c{};
  std::array<double, 3> f{};
  locate(position, c, f);
  double result = 0.0;
  for (int dz = 0; dz <= 1; ++dz) {
    const int k = std::min(c[2] + dz, spec_.dims[2] - 1);
    const double wz = dz ? f[2] : 1.0 - f[2];
    for (int dy = 0; dy <= 1; ++dy) {
      const int j = std::min(c[1] + dy, spec_.dims[1] - 1);
      const double wy = dy ? f[1] : 1.0 - f[1];
      for (int dx = 0; dx <= 1; ++dx) {
        const int i = std::min(c[0] + dx, spec_.dims[0] - 1);
        const double wx = dx ? f[0] : 1.0 - f[0];
        const double w = wx * wy * wz;
        if (w != 0.0) result += w * values_[index(i, j, k)];
      }
    }
  }
  return result;
}

Vec3 DiffusionGrid::node_gradient(int i, int j, int k) const {
  const std::array<int, 3> at{i, j, k};
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    const int n = spec_.dims[a];
    if (n == 1) continue;
    std::array<int, 3> lo = at;
    std::array<int, 3> hi = at;
    lo[a] = std::max(at[a] - 1, 0);
    hi[a] = std::min(at[a] + 1, n - 1);
    const double span = (hi[a] - lo[a]) * spec_.spacing;
    g[a] = (values_[index(hi[0], hi[1], hi[2])] - values_[index(lo[0], lo[1], lo[2])]) / span;
  }
  return g;
}

Vec3 DiffusionGrid::gradient_at(const Vec3& position) const {
  std::array<int, 3> c{};
  std::array<double, 3> f{};
  locate(position, c, f);
  Vec3 result;
  for (int dz = 0; dz <= 1; ++dz) {
    const int k = std::min(c[2] + dz, spec_.dims[2] - 1);
    const double wz = dz ? f[2] : 1.0 - f[2];
    for (int dy = 0; dy <= 1; ++dy) {
      const int j = std::min(c[1] + dy, spec_.dims[1] - 1);
      const double wy = dy ? f[1] : 1.0 - f[1];
      for (int dx = 0; dx <= 1; ++dx) {
        const int i = std::min(c[0] + dx, spec_.dims[0] - 1);
        const double wx = dx ? f[0] : 1.0 - f[0];
        const double w = wx * wy * wz;
        if (w != 0.0) result += w * node_gradient(i, j, k);
      }
    }
  }
  return result;
}

void DiffusionGrid::add_amount(const Vec3& position, double amount) {
  std::array<int, 3> node{};
  for (int a = 0; a < 3; ++a) {
    const double t = std::round((position[a] - spec_.origin[a]) / spec_.spacing);
    node[a] = static_cast<int>(std::clamp(t, 0.0, static_cast<double>(spec_.dims[a] - 1)));
  }
  const double h = spec_.spacing;
  double& v = values_[index(node[0], node[1], node[2])];
  v = std::max(0.0, v + amount / (h * h * h));
}

double DiffusionGrid::total_mass() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * spec_.spacing * spec_.spacing * spec_.spacing;
}

double DiffusionGrid::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double DiffusionGrid::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

void DiffusionGrid::write_csv(std::ostream& out) const {
  out << "x,y,z,value\n";
  for (int k = 0; k < spec_.dims[2]; ++k) {
    for (int j = 0; j < spec_.dims[1]; ++j) {
      for (int i = 0; i < spec_.dims[0]; ++i) {
        const Vec3 p = node_position(i, j, k);
        out << p.x << ',' << p.y << ',' << p.z << ',' << value(i, j, k) << '\n';
      }
    }
  }
}

}  // namespace biosim
