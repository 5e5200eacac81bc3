from typing import List, Optional, Sequence

from apprise import Apprise, AppriseAsset
from apprise.common import NotifyType

from chatwatch.cwlogger import logger

from .moderation_errors import NotificationFailure

chatwatch_asset = AppriseAsset(
    app_id="ChatWatch v.0.9.0",
    app_desc="ChatWatch: real-time toxic span detection and moderation reports for multiplayer in-game chat",
)


class Notifier(Apprise):
    """
    Apprise client carrying the ChatWatch asset.

    Parameters
    ----------
    servers : Optional[List[str]], optional
        Apprise service URLs, by default None
    """

    def __init__(self, servers: Optional[List[str]] = None):
        # positional: apprise 1.x names this `servers`, 2.x `services`
        super().__init__(servers, asset=chatwatch_asset)


def send_report(
    urls: Sequence[str],
    title: str,
    body: str,
    notify_type: NotifyType = NotifyType.INFO,
) -> None:
    """
    Deliver a rendered summary to every URL.

    Raises
    ------
    NotificationFailure
        If apprise reports a failed delivery.
    """
    if not urls:
        return
    notifier = Notifier(servers=list(urls))
    status = notifier.notify(body=body, title=title, notify_type=notify_type)
    if not status:
        logger.warning(f"Delivery of {title!r} failed")
        raise NotificationFailure(len(urls))
    logger.info(f"{title} delivered to {len(urls)} target(s)")
