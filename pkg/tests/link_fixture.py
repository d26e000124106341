"""Five indexed files, four bugs, one ambiguous basename; links enumerated by hand."""

from defectscope.buglink import BugRecord, FileBugLink, FileIndex, IndexedFile

FILES = (
    IndexedFile("f1", "alpha/src/net/socket.c", "c"),
    IndexedFile("f2", "alpha/src/util/parser.py", "python"),
    IndexedFile("f3", "alpha/lib/util/parser.py", "python"),
    IndexedFile("f4", "beta/src/Main.java", "java"),
    IndexedFile("f5", "beta/include/socket.h", "c"),
)

BUGS = (
    # diff header naming one file
    BugRecord("1", "tracker", "Socket leak on close",
              patch_text="--- a/src/net/socket.c\n+++ b/src/net/socket.c\n@@ -1 +1 @@\n-x\n+y\n",
              priority="High", bug_type="BugFix", os="Linux", comment_count=4),
    # summary-only bare basename shared by f2 and f3
    BugRecord("2", "tracker", "Crash in parser.py on empty input", priority="Low", comment_count=1),
    # one patch, two distinct files; also names f2 again through its full suffix
    BugRecord("3", "tracker", "Refactor entry point",
              patch_text=("diff --git a/src/util/parser.py b/src/util/parser.py\n"
                          "diff --git a/src/Main.java b/src/Main.java\n"),
              priority="Medium", bug_type="Enhancement", os="Windows", comment_count=9),
    # summary-only unique basename plus a mention that is not in the index
    BugRecord("4", "tracker", "socket.h lacks guard; see gone.c", priority="Critical", comment_count=0),
)

INDEX = FileIndex(FILES)

EXPECTED_LINKS = (
    FileBugLink("f1", "1", "patch-path", "src/net/socket.c", "tracker"),
    FileBugLink("f2", "3", "patch-path", "src/util/parser.py", "tracker"),
    FileBugLink("f4", "3", "patch-path", "src/Main.java", "tracker"),
    FileBugLink("f5", "4", "summary-mention", "socket.h", "tracker"),
)

EXPECTED_AMBIGUOUS = (("2", "parser.py", ("alpha/lib/util/parser.py", "alpha/src/util/parser.py")),)
EXPECTED_UNMATCHED = (("4", "gone.c"),)
