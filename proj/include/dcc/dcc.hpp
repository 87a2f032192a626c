#ifndef DCC_DCC_HPP
#define DCC_DCC_HPP

#include "dcc/bitstream.hpp"
#include "dcc/codec.hpp"
#include "dcc/config.hpp"
#include "dcc/edge.hpp"
#include "dcc/error.hpp"
#include "dcc/geometry.hpp"
#include "dcc/image.hpp"
#include "dcc/motion.hpp"
#include "dcc/pipeline.hpp"
#include "dcc/regions.hpp"
#include "dcc/resolution.hpp"
#include "dcc/scene.hpp"
#include "dcc/segmentation.hpp"
#include "dcc/telemetry.hpp"
#include "dcc/transform.hpp"

#endif // DCC_DCC_HPP
