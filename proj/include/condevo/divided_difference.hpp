#pragma once

#include "condevo/fock.hpp"

namespace condevo {

/// First divided difference of exp: (e^a - e^b) / (a - b), continuous
/// through a = b where it equals e^a.
cplx exp_divided_difference(cplx a, cplx b);

/// Second divided difference of exp at three points. Coincident points
/// are handled by a Taylor expansion about the centroid.
cplx exp_divided_difference(cplx a, cplx b, cplx c);

}  // namespace condevo
