/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_GRADIENT_HPP
#define QDL_GRADIENT_HPP

#include "qdl/protocols.hpp"

namespace qdl {

/// Analytic loss gradient by the parameter-shift rule: every rotation angle
/// is shifted by ±pi/2 in the inner expectations, with the chain rule applied
/// to the squared (CLC) or fidelity (ReQu/Qu) outer structure. The shifted
/// circuits are evaluated through cached prefix/suffix gate products, which
/// reproduces the shift-rule values exactly.
RealVector loss_gradient(Protocol protocol, const ParamCircuit& circuit,
                         const Dataset& dataset, const Observable* obs);

}  // namespace qdl

#endif
