#include "fracbly/fractional.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fftw3.h>

#include <boost/math/quadrature/gauss.hpp>

#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"

namespace fracbly {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;
using Plan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

std::int64_t product(const std::vector<int>& v) {
  std::int64_t p = 1;
  for (int x : v) p *= x;
  return p;
}

// Lattice sum of |m|^{-d-alpha} over 0 < |m| <= R, m in Z^d, by
// enumerating the closed positive orthant with multiplicities.
double lattice_power_sum(int d, double alpha, double R) {
  const double R2 = R * R;
  const double p = -0.5 * (d + alpha);
  const long r = static_cast<long>(std::floor(R));
  CompensatedSum total;
  if (d == 2) {
    for (long i = r; i >= 0; --i) {
      const double i2 = static_cast<double>(i * i);
      const long jmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R2 - i2))));
      double row = 0.0;
      for (long j = jmax; j >= 0; --j) {
        if (i == 0 && j == 0) continue;
        const double mult = (i > 0 ? 2.0 : 1.0) * (j > 0 ? 2.0 : 1.0);
        row += mult * std::pow(i2 + static_cast<double>(j * j), p);
      }
      total.add(row);
    }
  } else if (d == 3) {
    for (long i = r; i >= 0; --i) {
      const double i2 = static_cast<double>(i * i);
      const long jmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R2 - i2))));
      for (long j = jmax; j >= 0; --j) {
        const double ij2 = i2 + static_cast<double>(j * j);
        const long kmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R2 - ij2))));
        double row = 0.0;
        for (long k = kmax; k >= 0; --k) {
          if (i == 0 && j == 0 && k == 0) continue;
          const double mult = (i > 0 ? 2.0 : 1.0) * (j > 0 ? 2.0 : 1.0) * (k > 0 ? 2.0 : 1.0);
          row += mult * std::pow(ij2 + static_cast<double>(k * k), p);
        }
        total.add(row);
      }
    }
  } else {
    throw InvalidInput("lattice sums are implemented for d = 2, 3");
  }
  return total.value();
}

std::string fingerprint(const Domain& dom, double alpha, int n) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(dom.kind()) << '|' << dom.dimension() << '|';
  for (double c : dom.offset()) os << c << ',';
  os << '|';
  for (double e : dom.edges()) os << e << ',';
  os << '|' << dom.radius() << '|';
  for (const auto& v : dom.vertices()) os << v[0] << ':' << v[1] << ',';
  os << '|' << alpha << '|' << n;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
bool get_le(std::istream& is, T& value) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

constexpr char kMagic[8] = {'F', 'B', 'L', 'Y', 'K', 'E', 'R', 'N'};

}  // namespace

struct GridOperator::FftState {
  std::vector<int> padded;  // 2 n_i per axis
  std::int64_t real_size = 0;
  std::int64_t complex_size = 0;
  std::vector<std::complex<double>> kernel_hat;
  std::vector<std::int64_t> padded_index;  // per interior site
  Plan forward;
  Plan backward;
};

double fractional_constant(int d, double alpha) {
  if (d < 1) throw InvalidInput("fractional_constant needs d >= 1");
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidInput("fractional_constant needs 0 < alpha < 2");
  return std::pow(2.0, alpha) * gamma_fn(0.5 * (d + alpha)) /
         (std::pow(kPi, 0.5 * d) * std::abs(gamma_fn(-0.5 * alpha)));
}

double singular_cell_integral(int d, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidInput("singular_cell_integral needs 0 < alpha < 2");
  // Radial integration from the origin to the cube surface, summed over
  // the 2d faces: C = d/(2-alpha) int_{face} (|x|^2 + 1/4)^{(2-alpha-d)/2} dx.
  using Gauss = boost::math::quadrature::gauss<double, 30>;
  const double p = 0.5 * (2.0 - alpha - d);
  double face = 0.0;
  if (d == 1) {
    face = std::pow(0.25, p);
  } else if (d == 2) {
    face = Gauss::integrate([&](double x) { return std::pow(x * x + 0.25, p); }, -0.5, 0.5);
  } else if (d == 3) {
    face = Gauss::integrate(
        [&](double x) {
          return Gauss::integrate([&](double y) { return std::pow(x * x + y * y + 0.25, p); }, -0.5,
                                  0.5);
        },
        -0.5, 0.5);
  } else {
    throw InvalidInput("singular_cell_integral supports d <= 3");
  }
  return d / (2.0 - alpha) * face;
}

void GridOperator::init_fft() {
  auto st = std::make_shared<FftState>();
  st->padded.resize(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) st->padded[i] = 2 * sites_[i];
  st->real_size = product(st->padded);
  st->complex_size = st->real_size / st->padded.back() * (st->padded.back() / 2 + 1);

  auto rbuf = fftw_buffer<double>(static_cast<std::size_t>(st->real_size));
  auto cbuf = fftw_buffer<fftw_complex>(static_cast<std::size_t>(st->complex_size));
  st->forward.reset(fftw_plan_dft_r2c(d_, st->padded.data(), rbuf.get(), cbuf.get(), FFTW_ESTIMATE));
  st->backward.reset(fftw_plan_dft_c2r(d_, st->padded.data(), cbuf.get(), rbuf.get(), FFTW_ESTIMATE));
  if (!st->forward || !st->backward) throw std::runtime_error("FFTW planning failed");

  // Kernel on the padded grid, offsets wrapped modulo the padded extent.
  std::fill(rbuf.get(), rbuf.get() + st->real_size, 0.0);
  std::vector<int> ext(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) ext[i] = 2 * sites_[i] - 1;
  const std::int64_t count = product(ext);
  std::vector<int> o(static_cast<std::size_t>(d_));
  for (std::int64_t lin = 0; lin < count; ++lin) {
    std::int64_t rem = lin;
    for (int i = d_ - 1; i >= 0; --i) {
      o[i] = static_cast<int>(rem % ext[i]) - (sites_[i] - 1);
      rem /= ext[i];
    }
    std::int64_t pos = 0;
    for (int i = 0; i < d_; ++i) pos = pos * st->padded[i] + (o[i] + st->padded[i]) % st->padded[i];
    rbuf[pos] = kernel_[static_cast<std::size_t>(lin)];
  }
  fftw_execute_dft_r2c(st->forward.get(), rbuf.get(), cbuf.get());
  st->kernel_hat.resize(static_cast<std::size_t>(st->complex_size));
  for (std::int64_t i = 0; i < st->complex_size; ++i) {
    st->kernel_hat[i] = {cbuf[i][0], cbuf[i][1]};
  }

  st->padded_index.reserve(interior_.size());
  for (std::int64_t site : interior_) {
    std::int64_t rem = site;
    std::vector<int> idx(static_cast<std::size_t>(d_));
    for (int i = d_ - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % sites_[i]);
      rem /= sites_[i];
    }
    std::int64_t pos = 0;
    for (int i = 0; i < d_; ++i) pos = pos * st->padded[i] + idx[i];
    st->padded_index.push_back(pos);
  }
  fft_ = std::move(st);
}

double GridOperator::kernel(std::span<const int> offset) const {
  std::int64_t lin = 0;
  for (int i = 0; i < d_; ++i) {
    if (std::abs(offset[i]) >= sites_[i]) throw InvalidInput("kernel offset outside the lattice");
    lin = lin * (2 * sites_[i] - 1) + (offset[i] + sites_[i] - 1);
  }
  return kernel_[static_cast<std::size_t>(lin)];
}

void GridOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size() || out.size() != size()) throw InvalidInput("GridOperator::apply size mismatch");
  const FftState& st = *fft_;
  auto rbuf = fftw_buffer<double>(static_cast<std::size_t>(st.real_size));
  auto cbuf = fftw_buffer<fftw_complex>(static_cast<std::size_t>(st.complex_size));
  std::fill(rbuf.get(), rbuf.get() + st.real_size, 0.0);
  for (std::size_t k = 0; k < in.size(); ++k) rbuf[st.padded_index[k]] = in[k];
  fftw_execute_dft_r2c(st.forward.get(), rbuf.get(), cbuf.get());
  for (std::int64_t i = 0; i < st.complex_size; ++i) {
    const std::complex<double> z(cbuf[i][0], cbuf[i][1]);
    const std::complex<double> r = z * st.kernel_hat[static_cast<std::size_t>(i)];
    cbuf[i][0] = r.real();
    cbuf[i][1] = r.imag();
  }
  fftw_execute_dft_c2r(st.backward.get(), cbuf.get(), rbuf.get());
  const double norm = 1.0 / static_cast<double>(st.real_size);
  for (std::size_t k = 0; k < in.size(); ++k) {
    out[k] = diag_ * in[k] - norm * rbuf[st.padded_index[k]];
  }
}

void GridOperator::apply_direct(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size() || out.size() != size()) throw InvalidInput("apply_direct size mismatch");
  std::vector<std::vector<int>> idx(interior_.size(), std::vector<int>(static_cast<std::size_t>(d_)));
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    std::int64_t rem = interior_[k];
    for (int i = d_ - 1; i >= 0; --i) {
      idx[k][i] = static_cast<int>(rem % sites_[i]);
      rem /= sites_[i];
    }
  }
  std::vector<int> off(static_cast<std::size_t>(d_));
  for (std::size_t a = 0; a < interior_.size(); ++a) {
    CompensatedSum s;
    s.add(diag_ * in[a]);
    for (std::size_t b = 0; b < interior_.size(); ++b) {
      if (a == b) continue;
      for (int i = 0; i < d_; ++i) off[i] = idx[a][i] - idx[b][i];
      s.add(-kernel(off) * in[b]);
    }
    out[a] = s.value();
  }
}

Eigen::MatrixXd GridOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply_direct({e.data(), static_cast<std::size_t>(n)}, {col.data(), static_cast<std::size_t>(n)});
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

double GridOperator::symbol(std::span<const double> mu) const {
  if (static_cast<int>(mu.size()) != d_) throw InvalidInput("symbol: frequency has wrong dimension");
  const double R = rho_ / h_;
  const long r = static_cast<long>(std::floor(R));
  const double scale = a_const_ * std::pow(h_, -alpha_);
  const double p = -0.5 * (d_ + alpha_);
  CompensatedSum total;
  total.add(tail_);
  for (int i = 0; i < d_; ++i) total.add(nn_weight_ * 2.0 * (1.0 - std::cos(mu[i] * h_)));
  if (d_ == 2) {
    for (long i = -r; i <= r; ++i) {
      const long jmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R * R - double(i * i)))));
      double row = 0.0;
      for (long j = -jmax; j <= jmax; ++j) {
        if (i == 0 && j == 0) continue;
        const double m2 = static_cast<double>(i * i + j * j);
        row += std::pow(m2, p) * (1.0 - std::cos(h_ * (mu[0] * i + mu[1] * j)));
      }
      total.add(scale * row);
    }
  } else {
    for (long i = -r; i <= r; ++i) {
      const double i2 = double(i * i);
      const long jmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R * R - i2))));
      for (long j = -jmax; j <= jmax; ++j) {
        const double ij2 = i2 + double(j * j);
        const long kmax = static_cast<long>(std::floor(std::sqrt(std::max(0.0, R * R - ij2))));
        double row = 0.0;
        for (long k = -kmax; k <= kmax; ++k) {
          if (i == 0 && j == 0 && k == 0) continue;
          row += std::pow(ij2 + double(k * k), p) *
                 (1.0 - std::cos(h_ * (mu[0] * i + mu[1] * j + mu[2] * k)));
        }
        total.add(scale * row);
      }
    }
  }
  return total.value();
}

MatVec GridOperator::as_matvec() const {
  return [this](std::span<const double> in, std::span<double> out) { apply(in, out); };
}

std::string kernel_cache_name(const Domain& domain, double alpha, int n_per_axis) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "kernel_%016llx.bin",
                static_cast<unsigned long long>(fnv1a(fingerprint(domain, alpha, n_per_axis))));
  return buf;
}

void write_kernel_cache(const std::filesystem::path& path, const KernelCacheEntry& e) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write kernel cache " + path.string());
  os.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(os, kKernelCacheVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(e.d));
  for (int s : e.sites) put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s));
  put_le<double>(os, e.alpha);
  put_le<double>(os, e.h);
  put_le<std::uint64_t>(os, e.kernel.size());
  for (double v : e.kernel) put_le<double>(os, v);
  put_le<double>(os, e.diagonal);
  if (!os) throw IoError("failed writing kernel cache " + path.string());
}

std::optional<KernelCacheEntry> read_kernel_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  std::uint32_t version = 0, d = 0;
  if (!get_le(is, version) || version != kKernelCacheVersion) return std::nullopt;
  if (!get_le(is, d) || d < 1 || d > 3) return std::nullopt;
  KernelCacheEntry e;
  e.d = static_cast<int>(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    std::uint32_t s = 0;
    if (!get_le(is, s)) return std::nullopt;
    e.sites.push_back(static_cast<int>(s));
  }
  std::uint64_t count = 0;
  if (!get_le(is, e.alpha) || !get_le(is, e.h) || !get_le(is, count)) return std::nullopt;
  std::int64_t expected = 1;
  for (int s : e.sites) expected *= 2 * s - 1;
  if (count != static_cast<std::uint64_t>(expected)) return std::nullopt;
  e.kernel.resize(count);
  for (double& v : e.kernel) {
    if (!get_le(is, v)) return std::nullopt;
  }
  if (!get_le(is, e.diagonal)) return std::nullopt;
  return e;
}

GridOperator build_fractional_operator(const Domain& domain, double alpha, int n_per_axis) {
  const int d = domain.dimension();
  const bool supported = (domain.kind() == DomainKind::box && (d == 2 || d == 3)) ||
                         domain.kind() == DomainKind::disk;
  if (!supported) throw InvalidInput("fractional operator supports boxes (d = 2, 3) and disks");
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw InvalidInput("fractional operator needs 0 < alpha < 2 (alpha = 2 uses the exact spectra)");
  }
  if (n_per_axis < 16) throw InvalidInput("fractional operator needs n_per_axis >= 16");

  GridOperator op;
  op.domain_ = domain;
  op.d_ = d;
  op.alpha_ = alpha;
  op.n_per_axis_ = n_per_axis;

  const auto [lo, hi] = domain.bounding_box();
  double longest = 0.0;
  for (int i = 0; i < d; ++i) longest = std::max(longest, hi[i] - lo[i]);
  op.h_ = longest / n_per_axis;
  op.sites_.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    op.sites_[i] = std::max(1, static_cast<int>(std::lround((hi[i] - lo[i]) / op.h_)));
  }

  // Cell centres, lattice centred in the bounding box.
  const std::int64_t total = product(op.sites_);
  std::vector<double> p(static_cast<std::size_t>(d));
  for (std::int64_t lin = 0; lin < total; ++lin) {
    std::int64_t rem = lin;
    for (int i = d - 1; i >= 0; --i) {
      const auto idx = static_cast<int>(rem % op.sites_[i]);
      rem /= op.sites_[i];
      const double margin = 0.5 * ((hi[i] - lo[i]) - op.sites_[i] * op.h_);
      p[i] = lo[i] + margin + (idx + 0.5) * op.h_;
    }
    if (domain.contains(p)) op.interior_.push_back(lin);
  }
  if (op.interior_.empty()) throw InvalidInput("no lattice sites inside the domain");

  op.a_const_ = fractional_constant(d, alpha);
  double bbox_diam = 0.0;
  for (int i = 0; i < d; ++i) bbox_diam += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  bbox_diam = std::sqrt(bbox_diam);
  op.rho_ = 10.0 * bbox_diam;
  op.tail_ = op.a_const_ * d * unit_ball_volume(d) * std::pow(op.rho_, -alpha) / alpha;
  const double c = op.a_const_ / (2.0 * d) * std::pow(op.h_, 2.0 - alpha) * singular_cell_integral(d, alpha);
  op.nn_weight_ = c / (op.h_ * op.h_);

  std::optional<std::filesystem::path> cache_path;
  if (const char* dir = std::getenv(kCacheEnvVar); dir != nullptr && *dir != '\0') {
    cache_path = std::filesystem::path(dir) / kernel_cache_name(domain, alpha, n_per_axis);
    if (auto hit = read_kernel_cache(*cache_path);
        hit && hit->d == d && hit->sites == op.sites_ && hit->alpha == alpha && hit->h == op.h_) {
      op.kernel_ = std::move(hit->kernel);
      op.diag_ = hit->diagonal;
      op.init_fft();
      return op;
    }
  }

  const double scale = op.a_const_ * std::pow(op.h_, -alpha);
  std::vector<int> ext(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ext[i] = 2 * op.sites_[i] - 1;
  const std::int64_t count = product(ext);
  op.kernel_.assign(static_cast<std::size_t>(count), 0.0);
  for (std::int64_t lin = 0; lin < count; ++lin) {
    std::int64_t rem = lin;
    double m2 = 0.0;
    int nonzero = 0;
    int manhattan = 0;
    for (int i = d - 1; i >= 0; --i) {
      const int o = static_cast<int>(rem % ext[i]) - (op.sites_[i] - 1);
      rem /= ext[i];
      m2 += static_cast<double>(o) * o;
      nonzero += o != 0;
      manhattan += std::abs(o);
    }
    if (nonzero == 0) continue;
    double w = scale * std::pow(m2, -0.5 * (d + alpha));
    if (manhattan == 1) w += op.nn_weight_;
    op.kernel_[static_cast<std::size_t>(lin)] = w;
  }
  op.diag_ = scale * lattice_power_sum(d, alpha, op.rho_ / op.h_) + op.tail_ + 2.0 * d * op.nn_weight_;

  if (cache_path) {
    std::error_code ec;
    std::filesystem::create_directories(cache_path->parent_path(), ec);
    write_kernel_cache(*cache_path, {d, op.sites_, alpha, op.h_, op.kernel_, op.diag_});
  }
  op.init_fft();
  return op;
}

Spectrum fractional_eigs(const GridOperator& op, int K, const LanczosOptions& opts) {
  if (K < 1) throw InvalidInput("fractional_eigs needs K >= 1");
  if (static_cast<std::size_t>(K) * 4 > op.size()) {
    throw InvalidInput("fractional_eigs needs K <= interior sites / 4");
  }
  const EigenPairs pairs = lanczos_smallest(op.as_matvec(), op.size(), K, opts);
  Spectrum s;
  s.values = pairs.values;
  s.op = SpectrumOperator::fractional_numeric;
  s.domain = op.domain();
  s.alpha = op.alpha();
  s.grid_n = op.n_per_axis();
  return s;
}

}  // namespace fracbly
