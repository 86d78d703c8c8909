// Copyright 2026 The spinlab Authors
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

#include "spinlab/errors.hpp"
#include "spinlab/spin_core.hpp"
#include "spinlab/evolution.hpp"
#include "spinlab/ising_limit.hpp"
#include "spinlab/two_qubit.hpp"
#include "spinlab/gate_synth.hpp"
#include "spinlab/triplet_gate.hpp"
#include "spinlab/switching.hpp"
#include "spinlab/geometry.hpp"
#include "spinlab/io.hpp"
