// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

namespace mgiou {

template <class T>
struct Vec2 {
    T x{}, y{};

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(const T& s, const Vec2& a) { return {s * a.x, s * a.y}; }
};

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
    return a.x * b.x + a.y * b.y;
}

// 90-degree CCW rotation, the edge-to-normal map.
template <class T>
Vec2<T> perp(const Vec2<T>& e) {
    return {-e.y, e.x};
}

template <class T>
struct Vec3 {
    T x{}, y{}, z{};

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(const T& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
};

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

// Unit quaternion (w, x, y, z).
template <class T>
struct Quat {
    T w{}, x{}, y{}, z{};
};

template <class T>
Quat<T> normalized(const Quat<T>& q) {
    using std::sqrt;
    T n = sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

// Rotate v by unit quaternion q.
template <class T>
Vec3<T> rotate(const Quat<T>& q, const Vec3<T>& v) {
    // t = 2 q_vec x v;  v' = v + w t + q_vec x t
    T tx = T(2) * (q.y * v.z - q.z * v.y);
    T ty = T(2) * (q.z * v.x - q.x * v.z);
    T tz = T(2) * (q.x * v.y - q.y * v.x);
    return {v.x + q.w * tx + (q.y * tz - q.z * ty),
            v.y + q.w * ty + (q.z * tx - q.x * tz),
            v.z + q.w * tz + (q.x * ty - q.y * tx)};
}

}  // namespace mgiou
