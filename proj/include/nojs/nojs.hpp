#pragma once

#include "nojs/config.hpp"
#include "nojs/corpus.hpp"
#include "nojs/dom.hpp"
#include "nojs/encoding.hpp"
#include "nojs/errors.hpp"
#include "nojs/features.hpp"
#include "nojs/metrics.hpp"
#include "nojs/parser.hpp"
#include "nojs/reliance.hpp"
#include "nojs/report.hpp"
#include "nojs/requests.hpp"
#include "nojs/sections.hpp"
#include "nojs/selector.hpp"
#include "nojs/style.hpp"
#include "nojs/suffix_list.hpp"
#include "nojs/url.hpp"
