#pragma once

#include "svstokes/mesh.hpp"

namespace svstokes {

/// The two triangles sharing an interior edge e = {z, y}, seen from z.
/// `first` precedes e counter-clockwise around z (e is its trailing spoke),
/// `second` follows it. phi are the angles at z, theta the angles at y.
struct EdgePair {
    int edge = -1;
    int z = -1, y = -1;
    int first = -1, second = -1;
    double phi1 = 0, phi2 = 0;
    double theta1 = 0, theta2 = 0;
};

/// Throws GeometryError for boundary edges or if z is not an endpoint.
EdgePair edge_pair_geometry(const MeshTopology& topo, int edge, int z);

}  // namespace svstokes
