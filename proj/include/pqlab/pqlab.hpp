#pragma once

#include "pqlab/block.hpp"
#include "pqlab/codec.hpp"
#include "pqlab/error.hpp"
#include "pqlab/experiment.hpp"
#include "pqlab/fdpq.hpp"
#include "pqlab/metrics.hpp"
#include "pqlab/quant.hpp"
#include "pqlab/range_coder.hpp"
#include "pqlab/raw_io.hpp"
#include "pqlab/rdoq.hpp"
#include "pqlab/scan.hpp"
#include "pqlab/synthetic.hpp"
#include "pqlab/transform.hpp"
#include "pqlab/video.hpp"
