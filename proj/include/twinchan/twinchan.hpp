// twinchan - hybrid ray-traced / stochastic THz urban macrocell channel simulator
// Copyright (C) 2026 twinchan contributors
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

#include "twinchan/characterization.hpp"
#include "twinchan/foliage.hpp"
#include "twinchan/format.hpp"
#include "twinchan/geometry.hpp"
#include "twinchan/image.hpp"
#include "twinchan/linkeval.hpp"
#include "twinchan/raytrace.hpp"
#include "twinchan/rng.hpp"
#include "twinchan/scene.hpp"
#include "twinchan/stochastic.hpp"
#include "twinchan/synthesis.hpp"
