"""
Log routing for the command-line tool.

Library modules log through :class:`BraceStyleAdapter`; the CLI wraps each
invocation in a :class:`Logger` context that attaches the configured drivers
(stderr console, rotating JSON-lines file) and restores the previous logger
state on exit.  Nothing is ever written to stdout.
"""

from contextvars import ContextVar
from datetime import datetime, timezone
import logging
import logging.handlers
from pathlib import Path
import pprint
import sys
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    Tuple,
)

import coloredlogs
from pythonjsonlogger.jsonlogger import JsonFormatter
import trafaret as t

from .exception import ConfigurationError

__all__ = (
    'Logger',
    'BraceStyleAdapter',
    'is_active',
    'pretty',
    'logging_config_iv',
)

is_active: ContextVar[bool] = ContextVar('is_active', default=False)

level_iv = t.Enum('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL', 'NOTSET')
layout_iv = t.Enum('simple', 'verbose')

logging_config_iv = t.Dict({
    t.Key('level', default='WARNING'): level_iv,
    t.Key('pkg-ns', default={}): t.Mapping(t.String(allow_blank=True), level_iv),
    t.Key('drivers', default=['console']): t.List(t.Enum('console', 'file')),
    t.Key('console', default={}): t.Null | t.Dict({
        t.Key('colored', default=True): t.Bool,
        t.Key('format', default='simple'): layout_iv,
    }),
    t.Key('file', default=None): t.Null | t.Dict({
        t.Key('path'): t.String,
        t.Key('filename', default='chromatic.log'): t.String,
        t.Key('backup-count', default=5): t.ToInt[1:100],
        t.Key('rotation-size', default=10 * 2 ** 20): t.ToInt[1:],
    }),
}).allow_extra('*')

_layouts = {
    'simple': '%(levelname)s %(message)s',
    'verbose': '%(asctime)s %(levelname)s %(name)s [%(process)d] %(message)s',
}
_datefmt = '%Y-%m-%d %H:%M:%S'


class BraceMessage:

    __slots__ = ('fmt', 'args')

    def __init__(self, fmt: str, args: Tuple[Any, ...]) -> None:
        self.fmt = fmt
        self.args = args

    def __str__(self) -> str:
        return self.fmt.format(*self.args) if self.args else self.fmt


class BraceStyleAdapter(logging.LoggerAdapter):
    """Lets the package log with ``str.format()`` placeholders: ``log.debug('k={}', k)``."""

    def __init__(self, logger: logging.Logger, extra: Mapping[str, Any] = None) -> None:
        super().__init__(logger, extra or {})

    def log(self, level, msg, *args, **kwargs):
        if self.isEnabledFor(level):
            msg, kwargs = self.process(msg, kwargs)
            self.logger._log(level, BraceMessage(msg, args), (), **kwargs)


class JsonLineFormatter(JsonFormatter):
    """One JSON object per record, stamped with a UTC ``timestamp`` and the ``level`` name."""

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        stamp = datetime.fromtimestamp(record.created, tz=timezone.utc)
        log_record['timestamp'] = stamp.isoformat(timespec='milliseconds').replace('+00:00', 'Z')
        log_record['level'] = record.levelname


class pretty:
    """Defers ``pprint`` formatting of a value until the record is actually emitted."""

    def __init__(self, obj: Any) -> None:
        self.obj = obj

    def __repr__(self) -> str:
        return pprint.pformat(self.obj)


def _console_handler(options: Mapping[str, Any]) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    layout = _layouts[options['format']]
    formatter: logging.Formatter
    if options['colored'] and sys.stderr.isatty():
        formatter = coloredlogs.ColoredFormatter(
            layout,
            datefmt=_datefmt,
            level_styles={**coloredlogs.DEFAULT_LEVEL_STYLES, 'debug': {'color': 'blue'}},
            field_styles={**coloredlogs.DEFAULT_FIELD_STYLES, 'name': {'color': 'magenta'}},
        )
    else:
        formatter = logging.Formatter(layout, datefmt=_datefmt)
    handler.setFormatter(formatter)
    return handler


def _file_handler(options: Mapping[str, Any]) -> logging.Handler:
    directory = Path(options['path'])
    directory.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        directory / options['filename'],
        maxBytes=options['rotation-size'],
        backupCount=options['backup-count'],
        encoding='utf-8',
    )
    handler.setFormatter(JsonLineFormatter('%(name) %(process) %(message)'))
    return handler


class Logger:
    """
    Applies a validated ``[logging]`` table for the duration of a ``with`` block.

    ``level`` is set on the root logger and each ``pkg-ns`` entry on its own
    namespace (which then stops propagating), and every active driver's handler
    is attached to all of them.
    """

    def __init__(self, logging_config: Mapping[str, Any]) -> None:
        try:
            cfg = logging_config_iv.check(logging_config)
        except t.DataError as e:
            raise ConfigurationError(e.as_dict())
        for driver in cfg['drivers']:
            if cfg[driver] is None:
                raise ConfigurationError({'logging': f'{driver} driver is activated but no config given.'})
        self.config = cfg
        self.handlers: List[logging.Handler] = []
        self._saved: Dict[str, Tuple[int, bool]] = {}

    def __enter__(self) -> 'Logger':
        cfg = self.config
        if 'console' in cfg['drivers']:
            self.handlers.append(_console_handler(cfg['console']))
        if 'file' in cfg['drivers']:
            self.handlers.append(_file_handler(cfg['file']))
        targets = {'': cfg['level'], **cfg['pkg-ns']}
        for name, level in targets.items():
            target = logging.getLogger(name)
            self._saved[name] = (target.level, target.propagate)
            target.setLevel(level)
            if name:
                target.propagate = False
            for handler in self.handlers:
                target.addHandler(handler)
        self._token = is_active.set(True)
        return self

    def __exit__(self, *exc_info_args) -> None:
        is_active.reset(self._token)
        for name, (level, propagate) in self._saved.items():
            target = logging.getLogger(name)
            for handler in self.handlers:
                target.removeHandler(handler)
            target.setLevel(level)
            target.propagate = propagate
        for handler in self.handlers:
            handler.close()
        self.handlers.clear()
        self._saved.clear()
