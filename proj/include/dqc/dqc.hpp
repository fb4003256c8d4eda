// Copyright 2026 The dqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#ifndef DQC_VERSION
#define DQC_VERSION "1.0.0"
#endif

#include "dqc/bellhash.hpp"
#include "dqc/bits.hpp"
#include "dqc/ensembles.hpp"
#include "dqc/errors.hpp"
#include "dqc/matcore.hpp"
#include "dqc/oracles.hpp"
#include "dqc/protosim.hpp"
#include "dqc/rates.hpp"
#include "dqc/rng.hpp"
#include "dqc/typical.hpp"
