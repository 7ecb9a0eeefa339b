#! /usr/bin/env python
# -*- coding: utf-8 -*-

""" Module to I/O the data """

import os
import re
import json
import math
import warnings
from datetime import datetime

import numpy as np

OUTPUT_PATH = os.getenv('SOLSPACE_OUTPUT', default="~/solspace_runs/")
if OUTPUT_PATH == "~/solspace_runs/":
    warnings.warn(f"Default OUTPUT_PATH {OUTPUT_PATH} is used.")

SOLVER_PATH = os.getenv('SOLSPACE_SOLVER', default=None)
SOLSPACE_USER = os.getenv('SOLSPACE_USER', default="auto")

_PACKAGE_ROOT = os.path.abspath(os.path.dirname(__file__))+"/"

############################
#                          #
#  RUN STRUCTURE           #
#                          #
############################
TIMESTAMP_FORMAT = "%Y%m%dT%H%M%S"
RUN_FILES = {"data": "data.csv",
             "json": "data.json",
             "record": "run.json",
             "chart": "chart.svg",
             "traces": "traces.jsonl",
             "fits": "fits.json"}

RUNNAME_RE = r"^(?P<timestamp>\d{8}T\d{6})-(?P<seed>\d+)(-(?P<index>\d+))?$"

__all__ = ["get_run_dirname", "get_run_files", "parse_runname", "get_runs",
           "write_dataframe", "write_json", "write_jsonl", "read_json", "read_jsonl",
           "get_data_file"]

############################
#                          #
#  Data Access             #
#                          #
############################
def get_data_file(basename):
    """ full path of a file stored in the package data directory """
    return os.path.join(_PACKAGE_ROOT, "data", basename)

def get_outputpath(output_dir=None):
    """ expanded output root (OUTPUT_PATH by default) """
    return os.path.expanduser(OUTPUT_PATH if output_dir is None else output_dir)

def get_run_dirname(experiment, seed, output_dir=None, timestamp=None, create=True):
    """ directory of a run: output_dir/<experiment>/<timestamp>-<seed>/

    Parameters
    ----------
    experiment: [string]
        experiment name (gen, solve, homology, shatter...)

    seed: [int]
        master seed of the run.

    output_dir: [string/None] -optional-
        root directory. OUTPUT_PATH if None.

    timestamp: [datetime/None] -optional-
        run time (now if None).

    create: [bool] -optional-
        create the directory. An index is appended if the name is taken.

    Returns
    -------
    string (path)
    """
    timestamp = datetime.now() if timestamp is None else timestamp
    basename = "%s-%d" % (timestamp.strftime(TIMESTAMP_FORMAT), int(seed))
    root = os.path.join(get_outputpath(output_dir), experiment)
    dirname = os.path.join(root, basename)
    index = 0
    while create and os.path.exists(dirname):
        index += 1
        dirname = os.path.join(root, "%s-%d" % (basename, index))
    if create:
        os.makedirs(dirname)
    return dirname

def parse_runname(dirname):
    """ {"experiment", "timestamp", "seed"} from a run directory name """
    dirname = os.path.normpath(dirname)
    basename = os.path.basename(dirname)
    match = re.search(RUNNAME_RE, basename)
    if match is None:
        raise ValueError("Cannot parse the run directory name %s" % basename)
    return {"experiment": os.path.basename(os.path.dirname(dirname)),
            "timestamp": datetime.strptime(match.group("timestamp"), TIMESTAMP_FORMAT),
            "seed": int(match.group("seed"))}

def get_run_files(dirname, kinds=None):
    """ existing files of a run directory, keyed by kind (see RUN_FILES) """
    kinds = list(RUN_FILES.keys()) if kinds is None else kinds
    files = {}
    for kind in kinds:
        if kind not in RUN_FILES:
            raise ValueError("unknown run file kind %s. Known: %s" % (kind, ", ".join(RUN_FILES)))
        filename = os.path.join(dirname, RUN_FILES[kind])
        if os.path.isfile(filename):
            files[kind] = filename
    return files

def get_runs(experiment, output_dir=None):
    """ sorted run directories of an experiment """
    root = os.path.join(get_outputpath(output_dir), experiment)
    if not os.path.isdir(root):
        return []
    return sorted(os.path.join(root, d) for d in os.listdir(root)
                  if re.search(RUNNAME_RE, d) and os.path.isdir(os.path.join(root, d)))

#########################
#                       #
#   Writers / Readers   #
#                       #
#########################
def to_jsonable(obj):
    """ numpy and non finite values turned into plain JSON values (NaN -> null) """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj

def write_dataframe(dataframe, filename, drop=None):
    """ writes a DataFrame as CSV (without index), dropping the `drop` columns """
    if drop is not None:
        dataframe = dataframe.drop(columns=[c for c in drop if c in dataframe.columns])
    dataframe.to_csv(filename, index=False)
    return filename

def write_json(obj, filename, indent=2):
    """ """
    with open(filename, "w") as f:
        json.dump(to_jsonable(obj), f, indent=indent, sort_keys=True)
    return filename

def write_jsonl(records, filename):
    """ one JSON document per line """
    with open(filename, "w") as f:
        for record in records:
            f.write(json.dumps(to_jsonable(record), sort_keys=True) + "\n")
    return filename

def read_json(filename):
    """ """
    with open(filename) as f:
        return json.load(f)

def read_jsonl(filename):
    """ """
    with open(filename) as f:
        return [json.loads(line) for line in f if line.strip()]
