// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOPT_QOPT_HPP_INCLUDED
#define QOPT_QOPT_HPP_INCLUDED

#include "qopt/bits.hpp"
#include "qopt/commands.hpp"
#include "qopt/digest.hpp"
#include "qopt/dt_expand.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/io.hpp"
#include "qopt/metrics.hpp"
#include "qopt/netgen.hpp"
#include "qopt/parallel.hpp"
#include "qopt/qubo_ising.hpp"
#include "qopt/rational.hpp"
#include "qopt/samplers.hpp"
#include "qopt/skgraph.hpp"

#endif // QOPT_QOPT_HPP_INCLUDED
