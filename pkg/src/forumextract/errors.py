"""Exception types shared across the package."""


class ForumExtractError(Exception):
    """Base class for all errors raised by this package."""


class EncodingError(ForumExtractError):
    """Input bytes could not be decoded, even lossily."""


class UrlError(ForumExtractError):
    """A URL that must be absolute (scheme + host) is not."""


class PathResolutionError(ForumExtractError):
    """A node path matched nothing in the document."""


class NoPostsFound(ForumExtractError):
    """No candidate path produced enough sibling elements; the page has no
    repeating post structure."""


class MetadataNotFound(ForumExtractError):
    """No metadata candidate survived filtering; the field is absent."""


class MissingGoldError(ForumExtractError):
    """A gold record lacks the post texts needed for scoring."""


class CorpusEmptyError(ForumExtractError):
    """A gold corpus directory contains no valid html/json pair."""
