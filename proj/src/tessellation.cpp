#include "stf/tessellation.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stf/grid.hpp"

namespace stf {

DirectionSet icosa6() {
    const double s = std::sqrt(10.0 + 2.0 * std::sqrt(5.0));
    const double a = 2.0 / s;
    const double b = (1.0 + std::sqrt(5.0)) / s;
    DirectionSet d;
    d.dim = 3;
    d.directions = {
        a, 0.0, b,  //
        -a, 0.0, b, //
        b, a, 0.0,  //
        -b, a, 0.0, //
        0.0, b, a,  //
        0.0, -b, a, //
    };
    d.labels = {"n1", "n2", "n3", "n4", "n5", "n6"};
    return d;
}

DirectionSet half_circle(int K) {
    if (K < 2) throw parameter_error("half_circle: K must be >= 2");
    DirectionSet d;
    d.dim = 2;
    d.directions.reserve(2 * static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double ang = kPi * static_cast<double>(k) / static_cast<double>(K);
        double x = std::cos(ang);
        double y = std::sin(ang);
        // Snap roundoff dust so stored axes are exact.
        if (std::abs(x) < 1e-15) x = 0.0;
        if (std::abs(y) < 1e-15) y = 0.0;
        d.directions.push_back(x);
        d.directions.push_back(y);
        d.labels.push_back("d" + std::to_string(k));
    }
    return d;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<std::string> validate(const DirectionSet& d) {
    std::vector<std::string> violations;
    if (d.dim < 2) violations.push_back("dimension must be >= 2");
    const int K = d.count();
    if (K < 1) violations.push_back("direction count must be >= 1");
    if (static_cast<int>(d.labels.size()) != K)
        violations.push_back("label count does not match direction count");
    if (d.dim < 2 || K < 1) return violations;

    for (int k = 0; k < K; ++k) {
        const double norm = std::sqrt(dot(d.dir(k), d.dir(k)));
        if (std::abs(norm - 1.0) > 1e-12)
            violations.push_back("direction " + std::to_string(k) + " is not unit length");
    }
    for (int i = 0; i < K; ++i) {
        for (int j = i + 1; j < K; ++j) {
            const double dij = dot(d.dir(i), d.dir(j));
            const double ad = std::min(std::abs(dij), 1.0);
            const double angle = std::atan2(std::sqrt(std::max(0.0, 1.0 - ad * ad)), ad);
            if (angle < 1e-9) {
                violations.push_back("directions " + std::to_string(i) + " and " + std::to_string(j) +
                                     (dij > 0.0 ? " are duplicates" : " are antipodal"));
            }
        }
    }
    return violations;
}

SymMat frame_sum(const DirectionSet& d) {
    SymMat sum(d.dim);
    for (int k = 0; k < d.count(); ++k) sum += outer(d.dir(k));
    return sum;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string directions_to_csv(const DirectionSet& d) {
    std::ostringstream os;
    os << "label";
    for (int a = 0; a < d.dim; ++a) os << ",c" << a;
    os << "\r\n";
    for (int k = 0; k < d.count(); ++k) {
        os << d.labels[static_cast<std::size_t>(k)];
        for (double c : d.dir(k)) os << ',' << format_double(c);
        os << "\r\n";
    }
    return os.str();
}

std::string encode_directions(const DirectionSet& d) {
    std::ostringstream os;
    os << "dirs dim=" << d.dim << " k=" << d.count() << " v=";
    for (int k = 0; k < d.count(); ++k) {
        if (k) os << ';';
        const auto v = d.dir(k);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << format_double(v[i]);
        }
    }
    os << " l=";
    for (int k = 0; k < d.count(); ++k) {
        if (k) os << ';';
        os << d.labels[static_cast<std::size_t>(k)];
    }
    return os.str();
}

DirectionSet decode_directions(const std::string& s) {
    auto fail = [&](const std::string& why) -> DirectionSet {
        throw parameter_error("decode_directions: " + why);
    };
    std::istringstream is(s);
    std::string word;
    is >> word;
    if (word != "dirs") return fail("missing prefix");
    DirectionSet d;
    int K = 0;
    std::string vblob, lblob;
    while (is >> word) {
        if (word.rfind("dim=", 0) == 0)
            d.dim = std::stoi(word.substr(4));
        else if (word.rfind("k=", 0) == 0)
            K = std::stoi(word.substr(2));
        else if (word.rfind("v=", 0) == 0)
            vblob = word.substr(2);
        else if (word.rfind("l=", 0) == 0)
            lblob = word.substr(2);
        else
            return fail("unknown token " + word);
    }
    if (d.dim < 2 || K < 1) return fail("bad dim/count");
    std::stringstream vs(vblob);
    std::string row;
    while (std::getline(vs, row, ';')) {
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) d.directions.push_back(std::stod(cell));
    }
    std::stringstream ls(lblob);
    while (std::getline(ls, row, ';')) d.labels.push_back(row);
    if (static_cast<int>(d.directions.size()) != K * d.dim ||
        static_cast<int>(d.labels.size()) != K)
        return fail("inconsistent counts");
    return d;
}

} // namespace stf
