#pragma once

#include "mrassoc/channel.hpp"
#include "mrassoc/config.hpp"
#include "mrassoc/config_io.hpp"
#include "mrassoc/errors.hpp"
#include "mrassoc/experiments.hpp"
#include "mrassoc/game.hpp"
#include "mrassoc/oracle.hpp"
#include "mrassoc/partition.hpp"
#include "mrassoc/rates.hpp"
#include "mrassoc/scenario.hpp"
