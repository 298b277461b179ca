// Copyright 2026 The hamgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "hamgate/decomposition.hpp"
#include "hamgate/energetics.hpp"
#include "hamgate/error.hpp"
#include "hamgate/error_model.hpp"
#include "hamgate/evolution_sim.hpp"
#include "hamgate/gate_library.hpp"
#include "hamgate/matrix_io.hpp"
#include "hamgate/operator_core.hpp"
#include "hamgate/random.hpp"
#include "hamgate/report.hpp"
