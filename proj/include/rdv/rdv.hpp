#pragma once

#include "rdv/bitstream.hpp"
#include "rdv/codec.hpp"
#include "rdv/competition.hpp"
#include "rdv/errors.hpp"
#include "rdv/frame.hpp"
#include "rdv/frame_codec.hpp"
#include "rdv/metrics.hpp"
#include "rdv/motion.hpp"
#include "rdv/parallel.hpp"
#include "rdv/range_coder.hpp"
#include "rdv/resample.hpp"
#include "rdv/schedule.hpp"
#include "rdv/transform.hpp"
#include "rdv/y4m.hpp"
