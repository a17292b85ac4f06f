import logging
import os

from .errors import CorpusIoError

logger = logging.getLogger(__name__)


def strip_url(path):
    if "file:///" in path:
        path = path.replace("file:///", "/")
    return path


class File:
    """Text file access shared by the corpus loader, model store and report writer."""

    def save_file(self, path, ctx, mode="w", encoding="utf-8"):
        path = strip_url(path)
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        try:
            if "b" in mode:
                if isinstance(ctx, str):
                    ctx = ctx.encode(encoding)
                with open(path, mode) as f:
                    f.write(ctx)
            else:
                # "\n" line endings on every platform
                with open(path, mode, encoding=encoding, newline="") as f:
                    f.write(ctx)
        except OSError as e:
            raise CorpusIoError(f"cannot write {path}: {e}") from e
        logger.debug("wrote %s", path)

    def read_file(self, path, encoding="utf-8"):
        path = strip_url(path)
        if not self.is_exist(path):
            raise CorpusIoError(f"no such file: {path}")
        try:
            with open(path, "rb") as f:
                data = f.read()
        except OSError as e:
            raise CorpusIoError(f"cannot read {path}: {e}") from e
        try:
            return data.decode(encoding)
        except UnicodeDecodeError as e:
            raise CorpusIoError(f"{path} is not valid {encoding}: {e}") from e

    def is_exist(self, path):
        return os.path.exists(strip_url(path))
