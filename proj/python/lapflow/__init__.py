"""Complex-weighted graph Laplacians, eventual positivity certificates and consensus flows."""

import json

from ._lapflow import *  # noqa: F401,F403
from ._lapflow import report_json, report_json_for


def report(graph):
    return json.loads(report_json(graph))


def report_for(network):
    return json.loads(report_json_for(network))
