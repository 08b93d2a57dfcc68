// Copyright 2026 The qds-sim Authors
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

#include "qds/adversaries.hpp"
#include "qds/analysis.hpp"
#include "qds/checks.hpp"
#include "qds/config_file.hpp"
#include "qds/harness.hpp"
#include "qds/protocols.hpp"
#include "qds/quantum_core.hpp"
#include "qds/random.hpp"
#include "qds/report.hpp"
#include "qds/stats.hpp"
