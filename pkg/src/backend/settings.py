#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import json
import logging
import pathlib as pl
from typing import Any, Dict, Optional

import appdirs
import hjson
import jsonschema

from .errors import ConfigError


THIS_DIR = pl.Path(__file__).parent.resolve()
BASE_DIR = THIS_DIR.parent.resolve()

log = logging.getLogger(__name__)


def load_config(path:Optional[pl.Path]=None) -> Dict[str, Any]:
    path = pl.Path(path) if path is not None else BASE_DIR/'config.hjson'
    with open(BASE_DIR/'config.schema.json', 'r', encoding='utf8') as f:
        config_schema = jsonschema.Draft7Validator(json.load(f))
    try:
        with open(path, 'r', encoding='utf8') as f:
            config = hjson.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except hjson.HjsonDecodeError as e:
        raise ConfigError(f"config {path} line {e.lineno} col {e.colno}: {e.msg}") from e
    problems = [
        f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
        for err in sorted(config_schema.iter_errors(config), key=lambda err: list(err.absolute_path))
    ]
    if problems:
        raise ConfigError(f"config {path} is invalid: " + "; ".join(problems))
    return config


class SETTINGS: #pylint: disable=too-few-public-methods
    """
    It's a singleton container for the loaded configuration; sections are plain dicts straight out of config.hjson.
    """
    PATH: pl.Path = BASE_DIR/'config.hjson'
    solver: Dict[str, Any] = {}
    jobqueue: Dict[str, Any] = {}
    output: Dict[str, Any] = {}
    logging: Dict[str, Any] = {}

    @classmethod
    def reload_config(cls, path:Optional[pl.Path]=None):
        config = load_config(path)
        cls.PATH = pl.Path(path) if path is not None else BASE_DIR/'config.hjson'
        cls.solver = dict(config['solver'])
        cls.jobqueue = dict(config['jobqueue'])
        cls.output = dict(config['output'])
        cls.logging = dict(config['logging'])
        log.debug(f"SETTINGS.reload_config({cls.PATH=})")

    @classmethod
    def default_output_dir(cls) -> pl.Path:
        return pl.Path(appdirs.user_data_dir(cls.output['app_name'], cls.output['app_author'])) / "runs"


SETTINGS.reload_config()
