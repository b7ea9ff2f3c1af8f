import sys
import textwrap

from colorama import Fore, init

from app.main import main
from config.config import settings

init(autoreset=True)  # Initializes Colorama

if __name__ == "__main__":
    version = settings.APP_VERSION or "v0.1.0"
    print(
        textwrap.dedent(
            rf"""{Fore.BLUE}
  ____  ____  ____  __  __ ____  
 / ___||  _ \|  _ \|  \/  |  _ \ 
 \___ \| |_) | | | | |\/| | | | |
  ___) |  __/| |_| | |  | | |_| |
 |____/|_|   |____/|_|  |_|____/ 

 version: {version}
    """
        ),
        file=sys.stderr,
    )

    sys.exit(main())
