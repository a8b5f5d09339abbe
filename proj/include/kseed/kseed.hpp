#pragma once

#include "kseed/bench.hpp"
#include "kseed/core.hpp"
#include "kseed/io.hpp"
#include "kseed/kmeanspp.hpp"
#include "kseed/race_queue.hpp"
#include "kseed/report.hpp"
#include "kseed/rng.hpp"
#include "kseed/scalable.hpp"
#include "kseed/synthetic.hpp"
#include "kseed/vptree.hpp"
