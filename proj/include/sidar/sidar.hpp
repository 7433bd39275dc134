#pragma once

#include "sidar/error.hpp"
#include "sidar/rng.hpp"
#include "sidar/image.hpp"
#include "sidar/geometry.hpp"
#include "sidar/warp.hpp"
#include "sidar/scene.hpp"
#include "sidar/sampling.hpp"
#include "sidar/intersect.hpp"
#include "sidar/render.hpp"
#include "sidar/png_io.hpp"
#include "sidar/serialize.hpp"
#include "sidar/dataset.hpp"
#include "sidar/generate.hpp"
