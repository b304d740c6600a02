#pragma once

// Classic marching-cubes case tables (Lorensen & Cline layout, as tabulated
// by P. Bourke). Corner numbering:
//   0:(i,j,k) 1:(i+1,j,k) 2:(i+1,j+1,k) 3:(i,j+1,k)
//   4:(i,j,k+1) 5:(i+1,j,k+1) 6:(i+1,j+1,k+1) 7:(i,j+1,k+1)
// Edge e connects kEdgeCorners[e][0] -> kEdgeCorners[e][1].

namespace csdf::mc {

extern const int kEdgeTable[256];
extern const signed char kTriTable[256][16];
extern const int kEdgeCorners[12][2];

} // namespace csdf::mc
