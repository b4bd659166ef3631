"""
JSON-lines logging for the library and the CLI.

Every numerical module logs through the `logger` defined here: quadrature refinements and stencil
step choices at debug level, suite progress and report writes at info level, and extrapolations
that did not behave at warning level. Records go to `log/log.jsonl`, rotated at 1 MB.

Messages may be plain strings or dicts; a dict is stored under 'fields' so the numbers stay
machine readable.

Example Usage:
```
    logger.info("kernels suite finished")
    logger.debug({'quadrature': 'P_1 * f_1', 'level': 2, 'value': 0.99999})
```
"""
import json
import logging
from logging.handlers import RotatingFileHandler

from biharmonic_kernels.src import setting


LOG_FILE = setting.LOG_DIRECTORY_PATH / 'log.jsonl'
MAX_BYTES = 1024 * 1024
BACKUP_COUNT = 10


class JSONLinesFormatter(logging.Formatter):
    """
    Formats a record as one JSON object per line.

    Dict messages are kept as objects under 'fields'; anything else is rendered with `getMessage`.
    Values json cannot encode (numpy scalars, tuples of paths) fall back to `str`.
    """

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            'timestamp': self.formatTime(record),
            'level': record.levelname,
            'module': record.module,
            'line': record.lineno,
        }
        if isinstance(record.msg, dict):
            entry['message'] = next(iter(record.msg), '')
            entry['fields'] = record.msg
        else:
            entry['message'] = record.getMessage()
        if record.exc_info:
            entry['exception'] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


def build_logger(name: str = 'biharmonic_kernels') -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    if not logger.handlers:
        setting.LOG_DIRECTORY_PATH.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(LOG_FILE, maxBytes=MAX_BYTES, backupCount=BACKUP_COUNT)
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(JSONLinesFormatter())
        logger.addHandler(handler)
    return logger


logger = build_logger()


if __name__ == '__main__':
    logger.info("log handler ready")
    logger.debug({'refinement': 0})
