#pragma once

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"
#include "spincam/config.hpp"
#include "spincam/dataset.hpp"
#include "spincam/downwash.hpp"
#include "spincam/dynamics.hpp"
#include "spincam/errors.hpp"
#include "spincam/eval.hpp"
#include "spincam/extrinsic.hpp"
#include "spincam/geometry.hpp"
#include "spincam/perception.hpp"
#include "spincam/pose_log.hpp"
#include "spincam/scenario.hpp"
#include "spincam/timesync.hpp"
