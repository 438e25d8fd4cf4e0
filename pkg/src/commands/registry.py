#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import importlib
import pkgutil
from typing import Callable, Dict, List, Optional, TypedDict, cast

import pandas as pd


class CommandEntry(TypedDict):
    module: str
    name: str
    help: str
    order: float
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[argparse.Namespace], int]


_entries:Dict[str, CommandEntry] = {}
registry = pd.DataFrame() #pylint: disable=invalid-name


def register_command(module:str, configure:Callable[[argparse.ArgumentParser], None], run:Callable[[argparse.Namespace], int],
                     name:Optional[str]=None, help:str="", order:float=0) -> CommandEntry: #pylint: disable=redefined-builtin
    """Called at import time by every command module; `discover` triggers the imports."""
    name = name or module.rsplit('.', 1)[-1]
    if name in _entries and _entries[name]['module'] != module:
        raise ValueError(f"command {name!r} registered twice ({_entries[name]['module']}, {module})")
    entry = CommandEntry(module=module, name=name, help=help, order=order, configure=configure, run=run)
    _entries[name] = entry
    return entry


def discover() -> List[str]:
    """Import every module of the commands package so each one registers itself."""
    package = importlib.import_module(__package__)
    found = []
    for info in pkgutil.iter_modules(package.__path__):
        if info.name in ('registry', 'common'):
            continue
        importlib.import_module(f"{__package__}.{info.name}")
        found.append(info.name)
    return found


def compile_registry() -> pd.DataFrame:
    global registry #pylint: disable=global-statement
    discover()
    records = [{k: v for k, v in e.items() if k not in ('configure', 'run')} for e in _entries.values()]
    registry = pd.DataFrame.from_records(records, columns=['module', 'name', 'help', 'order']) \
        .sort_values(['order', 'name']) \
        .reset_index(drop=True)
    return registry


def get_entry(name:str) -> CommandEntry:
    if name not in _entries:
        raise KeyError(f"no command named {name!r}")
    return cast(CommandEntry, _entries[name])
