// Copyright 2026 The cswap-lab Authors
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

#include "cswap/closed_forms.hpp"
#include "cswap/csv.hpp"
#include "cswap/experiments.hpp"
#include "cswap/hilbert.hpp"
#include "cswap/measures.hpp"
#include "cswap/optical.hpp"
#include "cswap/qstates.hpp"
#include "cswap/rng.hpp"
#include "cswap/shots.hpp"
#include "cswap/swaptest.hpp"
