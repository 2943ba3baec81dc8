// SPDX-License-Identifier: Apache-2.0
//
// sparsefocus: coherent broadband focusing for sparse linear arrays
// Copyright (C) 2026 The sparsefocus authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "acm.hpp"
#include "correlation.hpp"
#include "error.hpp"
#include "estimation.hpp"
#include "focusing.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "iss.hpp"
#include "metrics.hpp"
#include "random.hpp"
#include "resampling.hpp"
#include "synthesis.hpp"
#include "types.hpp"
