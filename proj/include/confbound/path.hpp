#pragma once

// Non-tangential approach sequences z_n = sigma (1 - s0 q^n e^{i beta}).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace confbound {

class ApproachPath {
public:
    // vertex == nullopt is the half-plane point at infinity; the disk
    // representation then uses sigma = 1.
    explicit ApproachPath(std::optional<Complex> vertex, double aperture = 0.0,
                          double start_offset = 0.5, double ratio = 0.5, int length = 48)
        : vertex_(vertex), aperture_(aperture), s0_(start_offset), q_(ratio), length_(length) {
        if (vertex_) require_unimodular(*vertex_, "path vertex");
        if (!(std::abs(aperture) < M_PI / 2))
            throw std::invalid_argument("aperture must lie in (-pi/2, pi/2)");
        if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0, 1)");
        if (!(start_offset > 0.0 && start_offset < 2.0 * std::cos(aperture)))
            throw std::invalid_argument("start offset puts the path outside the disk");
        if (length < 2) throw std::invalid_argument("path length must be at least 2");
    }

    static ApproachPath radial(Complex sigma, int length = 48) {
        return ApproachPath(sigma, 0.0, 0.5, 0.5, length);
    }

    Complex vertex() const { return vertex_ ? *vertex_ : Complex(1.0, 0.0); }
    bool at_infinity() const { return !vertex_; }
    double aperture() const { return aperture_; }
    double start_offset() const { return s0_; }
    double ratio() const { return q_; }
    int length() const { return length_; }

    ApproachPath with_aperture(double beta) const {
        return ApproachPath(vertex_, beta, std::min(s0_, 0.99 * 2.0 * std::cos(beta)), q_, length_);
    }
    ApproachPath mirrored() const { return with_aperture(-aperture_); }

    // 1 - conj(sigma) z_n = s0 q^n e^{i beta}
    QComplex offset(int n) const {
        QReal s = QReal(s0_) * boost::multiprecision::pow(QReal(q_), n);
        return QComplex(s * boost::multiprecision::cos(QReal(aperture_)),
                        s * boost::multiprecision::sin(QReal(aperture_)));
    }

    QComplex disk_point(int n) const { return boundary_point_quad(vertex()) * (QComplex(1) - offset(n)); }

    // Cayley preimage of conj(sigma) z_n: (2 - t)/t with t the offset.
    QComplex halfplane_point(int n) const {
        QComplex t = offset(n);
        return (QComplex(2) - t) / t;
    }

    // k(0, z_n)
    double depth(int n) const {
        QComplex z = disk_point(n);
        return num::to_double(geo::distance_disk(z, QComplex(0)));
    }

    std::vector<QComplex> disk_points() const {
        std::vector<QComplex> out;
        for (int n = 0; n < length_; ++n) out.push_back(disk_point(n));
        return out;
    }

    std::vector<double> depths() const {
        std::vector<double> out;
        for (int n = 0; n < length_; ++n) out.push_back(depth(n));
        return out;
    }

    std::vector<double> steps() const {
        std::vector<double> out;
        for (int n = 0; n + 1 < length_; ++n)
            out.push_back(num::to_double(geo::distance_disk(disk_point(n), disk_point(n + 1))));
        return out;
    }

    // lim k(z_n, z_{n+1}) = 2 artanh((1 - q)/|q + e^{2 i beta}|)
    double step_limit() const {
        return 2.0 * std::atanh((1.0 - q_) / std::abs(q_ + std::polar(1.0, 2.0 * aperture_)));
    }

private:
    std::optional<Complex> vertex_;
    double aperture_;
    double s0_;
    double q_;
    int length_;
};

}  // namespace confbound
