#include "svstokes/edge_geometry.hpp"

#include "svstokes/errors.hpp"

namespace svstokes {

EdgePair edge_pair_geometry(const MeshTopology& topo, int edge, int z) {
    const Edge& e = topo.edge(edge);
    if (e.v[0] != z && e.v[1] != z) throw GeometryError("vertex is not an endpoint of the edge");
    if (e.boundary()) throw GeometryError("edge " + std::to_string(edge) + " is a boundary edge");
    EdgePair p;
    p.edge = edge;
    p.z = z;
    p.y = e.other(z);
    for (int t : e.tris) {
        const int k = topo.slot(t, z);
        // in a counter-clockwise triangle (z, a, b) the spoke z->b trails
        if (topo.triangle(t)[(k + 2) % 3] == p.y) {
            p.first = t;
        } else {
            p.second = t;
        }
    }
    if (p.first < 0 || p.second < 0) throw GeometryError("inconsistent orientation around edge");
    const TriangleGeom& g1 = topo.geom(p.first);
    const TriangleGeom& g2 = topo.geom(p.second);
    p.phi1 = g1.angle[topo.slot(p.first, z)];
    p.phi2 = g2.angle[topo.slot(p.second, z)];
    p.theta1 = g1.angle[topo.slot(p.first, p.y)];
    p.theta2 = g2.angle[topo.slot(p.second, p.y)];
    return p;
}

}  // namespace svstokes
