//! Writes the golden pipeline fixture archive.
//!
//! Every response URL has the form `https://<host>/<ExpectedReason>/<slug>`
//! so tests can check each document's fate independently of the pipeline.
//!
//! ```text
//! cargo run -p twcurate --example make_golden_fixture -- crates/core/tests/fixtures/golden.warc.gz
//! ```

use std::fs::File;
use std::io::BufWriter;

use twcurate::corpus_io::{document_id, WarcWriter};

const DATE: &str = "2024-06-15T08:00:00Z";
const HOST: &str = "golden.example.tw";

/// Appears at the end of six documents; trimmed at threshold 3.
const HOT: &str = "本站文章皆為作者原創，轉載前請先取得授權並註明出處，感謝您的支持與配合，歡迎分享給更多喜歡臺灣文化的朋友，如有任何問題請透過網站留言與我們聯繫。";
/// Appears at the start of exactly three documents; never trimmed.
const WARM: &str = "歡迎來到寶島生活誌，每週為您帶來最新的在地故事。";

const NIGHT_MARKET: &[&str] = &[
    "台灣的夜市文化歷史悠久，每到傍晚，街道兩旁便擺滿各式各樣的攤位。",
    "遊客可以品嚐蚵仔煎、臭豆腐、珍珠奶茶等道地小吃，感受熱鬧的氣氛。",
    "許多夜市也結合在地特色，吸引國內外觀光客前來朝聖。",
    "逛夜市時記得自備環保餐具，減少一次性用品的浪費。",
    "有些攤商傳承了三代，堅持使用古早的做法與新鮮的食材。",
];
const YUSHAN: &[&str] = &[
    "玉山是臺灣最高的山峰，海拔將近四千公尺，是登山愛好者心中的聖地。",
    "登山前必須申請入園許可，並做好體能訓練與裝備檢查。",
    "清晨站在主峰上看日出，雲海翻騰的景色令人難以忘懷。",
    "山屋床位有限，旺季時往往需要提早數個月抽籤。",
    "下山途中也別忘了欣賞沿途的高山杜鵑與冷杉林。",
];
const TEA: &[&str] = &[
    "烏龍茶是臺灣最具代表性的茶類之一，以高山茶最為知名。",
    "茶農依照季節採摘茶葉，再經過萎凋、揉捻與烘焙等繁複工序。",
    "一杯好茶不僅香氣濃郁，入口回甘，更承載著世代傳承的技藝。",
    "泡茶時水溫與浸泡時間都會影響茶湯的滋味。",
    "不少茶園開放遊客體驗採茶，親身感受茶農的辛勞。",
];
const METRO: &[&str] = &[
    "臺北捷運自通車以來，已成為市民日常通勤最倚賴的交通工具。",
    "請開啟瀏覽器的 JavaScript 功能以獲得最佳瀏覽體驗。",
    "各條路線串連市區與近郊，班次密集且準點率相當高。",
    "車廂內禁止飲食的規定，也讓整體環境保持得十分乾淨。",
    "尖峰時段人潮擁擠，乘客會自動靠右站立讓出通道。",
    "各站出口附近通常設有公共自行車租借站，方便轉乘。",
];
const TEMPLE: &[&str] = &[
    "臺灣各地的廟宇不只是信仰中心，也是社區居民聚會交流的場所。",
    "每逢神明誕辰，廟方會舉辦遶境與祭典，吸引大批信眾參與。",
    "精緻的木雕、石雕與彩繪，更展現了傳統工藝之美。",
    "參拜時應遵守廟方的規矩，保持安靜並尊重其他信眾。",
    "許多老廟也被列為古蹟，由專業團隊進行修復與保存。",
    "使用本網站即表示您同意我們的隱私權政策。",
];
const TYPHOON: &[&str] = &[
    "夏秋之際是颱風最常侵襲臺灣的季節，氣象單位會密切監測路徑。",
    "民眾應事先準備飲用水、手電筒與乾糧，並固定門窗以策安全。",
    "颱風過後，各地也常動員志工協助清理街道與倒塌的樹木。",
];
const LIBRARY: &[&str] = &[
    "公共圖書館提供免費的借閱服務，是培養閱讀習慣的好地方。",
    "除了紙本書籍，許多分館也提供電子書與線上資料庫查詢。",
    "假日時常舉辦說故事活動，讓孩子從小親近書本。",
];
const RICE: &[&str] = &[
    "嘉南平原是臺灣重要的稻米產區，灌溉系統完善。",
    "農民一年可收成兩期稻作，供應全國大部分的白米需求。",
    "近年來也有不少年輕人返鄉務農，嘗試以友善耕作種植有機米。",
];
const CYCLING: &[&str] = &[
    "環島騎自行車是許多年輕人的夢想，沿途可以欣賞山海交織的美景。",
    "規劃路線時應留意補給站的位置，並在出發前檢查車況。",
    "沿途的便利商店與警察局多半提供休息與打氣的服務。",
];
const CALLIGRAPHY: &[&str] = &[
    "書法是漢字獨有的藝術形式，講究筆畫的力道與結構的平衡。",
    "學習書法需要耐心，從臨摹字帖開始，逐步培養對線條的感受。",
    "許多學校也開設書法社團，讓學生體驗傳統文化的魅力。",
];
const HOT_SPRING: &[&str] = &[
    "北投的溫泉在日治時期便已開發，至今仍是熱門的休閒景點。",
    "泡湯前應先沖洗身體，並注意水溫與浸泡時間，以免身體不適。",
    "附近的溫泉博物館介紹了當地的歷史與地熱谷的形成。",
];
const CORAL: &[&str] = &[
    "墾丁國家公園位於臺灣最南端，擁有豐富的珊瑚礁生態與熱帶海岸林。",
    "每年春夏之交，珊瑚會在滿月後的夜晚集體產卵，場面相當壯觀。",
    "研究人員長期監測海水溫度的變化，發現暖化正威脅珊瑚的生存。",
    "為了保護海洋資源，園區限制部分海域的活動，並推廣無痕旅遊的觀念。",
    "遊客參加浮潛行程時，應避免踩踏或觸摸珊瑚，也不要餵食魚群。",
];

fn paragraphs(lines: &[&str]) -> String {
    lines.iter().map(|l| format!("<p>{l}</p>\n")).collect()
}

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{title}</title>\
         <script>var page = {{ id: 1 }};</script></head>\n<body>\n\
         <nav><a href=\"/\">首頁</a> <a href=\"/news\">最新消息</a> <a href=\"/about\">關於我們</a></nav>\n\
         <main>\n<h1>{title}</h1>\n{body}</main>\n\
         <footer>版權所有 寶島生活誌編輯部</footer>\n</body></html>\n"
    )
}

struct Page {
    slug: String,
    expect: String,
    host: String,
    content_type: String,
    body: Vec<u8>,
}

impl Page {
    fn html(slug: &str, expect: &str, title: &str, body: &str) -> Self {
        Page {
            slug: slug.into(),
            expect: expect.into(),
            host: HOST.into(),
            content_type: "text/html; charset=UTF-8".into(),
            body: page(title, body).into_bytes(),
        }
    }

    fn on_host(mut self, host: &str) -> Self {
        self.host = host.into();
        self
    }

    fn record_id(&self) -> String {
        format!("<urn:uuid:golden-{}>", self.slug)
    }
}

fn pages() -> Vec<Page> {
    let mut v = Vec::new();
    let with_hot = |lines: &[&str]| format!("{}<p>{HOT}</p>\n", paragraphs(lines));
    let with_warm = |lines: &[&str]| format!("<p>{WARM}</p>\n{}", paragraphs(lines));

    // Survivors.
    v.push(Page::html("night-market", "Kept", "夜市巡禮", &with_hot(NIGHT_MARKET)));
    v.push(Page::html("yushan", "Kept", "登上玉山", &with_hot(YUSHAN)));
    v.push(Page::html("tea", "Kept", "臺灣茶香", &with_hot(TEA)));
    v.push(Page::html("metro", "Kept", "捷運生活", &with_hot(METRO)));
    v.push(Page::html("temple", "Kept", "廟宇巡禮", &with_hot(TEMPLE)));
    v.push(Page::html("typhoon", "Kept", "颱風季節", &with_warm(TYPHOON)));
    v.push(Page::html("library", "Kept", "走進圖書館", &with_warm(LIBRARY)));
    v.push(Page::html("rice", "Kept", "稻米之鄉", &with_warm(RICE)));
    v.push(Page::html("calligraphy", "Kept", "書法之美", &paragraphs(CALLIGRAPHY)));
    v.push(Page::html(
        "hot-spring",
        "Kept",
        "北投溫泉",
        &format!(
            "<div class=\"sidebar\"><p>熱門文章排行榜與最新留言一覽。</p></div>\n{}\
             <p><a href=\"/a\">上一篇文章</a> <a href=\"/b\">下一篇文章</a></p>\n",
            paragraphs(HOT_SPRING)
        ),
    ));
    let cycling = page("單車環島", &paragraphs(CYCLING)).replace("utf-8", "big5");
    let (big5, _, _) = encoding_rs::BIG5.encode(&cycling);
    v.push(Page {
        slug: "cycling-big5".into(),
        expect: "Kept".into(),
        host: HOST.into(),
        content_type: "text/html; charset=big5".into(),
        body: big5.into_owned(),
    });

    // A near-duplicate cluster of three: the original, a two-character
    // edit, and an exact copy. Labels are assigned by id below.
    let coral = paragraphs(CORAL);
    v.push(Page::html("coral", "Cluster", "墾丁珊瑚", &coral));
    v.push(Page::html(
        "coral-edit",
        "Cluster",
        "墾丁珊瑚",
        &coral.replace("壯觀", "震撼"),
    ));
    v.push(Page::html("coral-copy", "Cluster", "墾丁珊瑚", &coral));

    // Nothing but the hot line.
    v.push(Page::html("hot-only", "EmptyAfterTrim", "", &format!("<p>{HOT}</p>\n")));

    // Prefilter.
    v.push(
        Page::html("blocked-host", "UrlBlocked", "夜市巡禮", &paragraphs(NIGHT_MARKET)).on_host("blocked.example.com"),
    );
    v.push(
        Page::html("blocked-sub", "UrlBlocked", "登上玉山", &paragraphs(YUSHAN)).on_host("www.casino-royal.example"),
    );
    v.push(Page {
        slug: "english".into(),
        expect: "NoCjkRun".into(),
        host: HOST.into(),
        content_type: "text/html".into(),
        body: b"<html><body><p>The weather in Taipei is warm and humid for most of the year.</p></body></html>"
            .to_vec(),
    });
    v.push(Page {
        slug: "split-cjk".into(),
        expect: "NoCjkRun".into(),
        host: HOST.into(),
        content_type: "text/html; charset=UTF-8".into(),
        body: "<html><body><p>台北 天氣 晴朗 溫度 適中 風速 微弱 午後 雷陣雨。</p></body></html>"
            .as_bytes()
            .to_vec(),
    });

    // Language identification.
    v.push(Page::html(
        "japanese",
        "LowLangConfidence",
        "東京の桜",
        "<p>今日はとても良い天気ですね。東京の桜が満開になりました。</p>\n\
         <p>週末には多くの人が花見を楽しみに公園へ出かけます。</p>\n",
    ));
    v.push(Page::html("nav-only", "LowLangConfidence", "", "").on_host(HOST));
    v.push(Page::html(
        "english-mostly",
        "LowLangConfidence",
        "Guide",
        "<p>台灣美食推薦 is a guide to the best street food in Taipei, covering night markets, \
         breakfast shops, and traditional desserts that every visitor should try at least once.</p>\n",
    ));
    v.push(Page::html(
        "simplified",
        "SimplifiedScript",
        "学校生活",
        "<p>我们这个国家的学生都会说中文，学校里的老师也很认真。</p>\n\
         <p>每天早上，学生们在操场上做运动，然后开始上课。</p>\n",
    ));
    v.push(Page::html(
        "one-simplified-char",
        "SimplifiedScript",
        "颱風季節",
        &paragraphs(&[
            "夏秋之際是颱風最常侵襲臺灣的季節，氣象單位會密切監測路徑。",
            "颱風過後，各地也常动員志工協助清理街道與倒塌的樹木。",
        ]),
    ));
    v.push(Page::html(
        "phrase-video",
        "BlockedPhrase",
        "影音推薦",
        "<p>我們推薦這款視頻播放器，介面簡潔，支援多種影音格式。</p>\n",
    ));
    v.push(Page::html(
        "phrase-software",
        "BlockedPhrase",
        "工具分享",
        "<p>這套軟件可以幫助你整理照片，操作起來十分容易上手。</p>\n",
    ));

    // Gopher.
    v.push(Page::html("too-short", "TooShort", "", "<p>今天天氣晴朗。</p>\n"));
    let long_line = "臺灣的天氣很好。";
    let long_body: String = (0..14_300).map(|_| format!("{long_line}<br>")).collect();
    v.push(Page::html(
        "too-long",
        "TooLong",
        "長篇",
        &format!("<p>{long_body}</p>\n"),
    ));
    let tags: String = [
        "台灣", "美食", "夜市", "小吃", "旅遊", "拍照", "打卡", "週末", "假期", "推薦",
    ]
    .iter()
    .cycle()
    .take(30)
    .map(|t| format!("#{t} "))
    .collect();
    v.push(Page::html(
        "hashtags",
        "SymbolRatio",
        "今日的美食分享",
        &format!("<p>今天的晚餐非常豐盛。</p>\n<p>{tags}</p>\n"),
    ));
    v.push(Page::html(
        "ellipsis",
        "EllipsisLines",
        "未完待續",
        &paragraphs(&[
            "那天晚上我們沿著河堤散步，遠方的燈火一盞一盞亮了起來……",
            "她說起小時候在外婆家度過的暑假，還有那棵老榕樹……",
            "後來我們都離開了家鄉，各自在不同的城市裡生活著……",
            "多年以後再次相聚，大家都已經不是當年的模樣了。",
        ]),
    ));
    v.push(Page::html(
        "no-stop-words",
        "NoStopWords",
        "豪雨特報",
        &paragraphs(&[
            "臺北市政府今日發布豪雨特報，提醒民眾外出注意安全。",
            "氣象署預估北部山區雨量可能超過兩百毫米，請遠離河川與山坡地。",
            "公路單位同步加強巡查易坍方路段，視情況實施預警性封路。",
        ]),
    ));

    // C4.
    v.push(Page::html(
        "brackets",
        "BracketRatio",
        "地理簡介",
        &paragraphs(&[
            "臺灣（Taiwan）位於東亞，西隔臺灣海峽與大陸相望（約一百三十公里）。",
            "島上的中央山脈（Central Range）縱貫南北，形成多樣的氣候與生態。",
            "臺灣的人口大多集中在西部平原，北部、中部與南部各有重要的都會區。",
        ]),
    ));

    // FineWeb.
    v.push(Page::html(
        "no-punctuation",
        "LinePunctRatio",
        "商品清單",
        &paragraphs(&[
            "新鮮的當季水果禮盒限時特價供應中",
            "手工製作的傳統糕餅禮盒買二送一",
            "來自阿里山的高山烏龍茶葉精裝組",
            "花蓮有機栽培的白米五公斤家庭號",
            "屏東黑鮪魚季限定的生魚片拼盤組合",
        ]),
    ));
    v.push(Page::html(
        "short-lines",
        "ShortLineRatio",
        "小詩",
        &paragraphs(&[
            "今天的天氣很好。",
            "我們去公園散步。",
            "花開得非常漂亮。",
            "小鳥在樹上唱歌。",
            "孩子們放著風箏。",
            "老人家下著象棋。",
            "夕陽慢慢落下了。",
            "晚風輕輕吹過來。",
            "大家都回家吃飯。",
            "明天還要再來玩。",
        ]),
    ));
    let repeated = "本店營業時間為每日上午十點至晚上九點，歡迎各位顧客蒞臨選購。";
    v.push(Page::html(
        "duplicated-lines",
        "CharDupRatio",
        "門市資訊",
        &paragraphs(&[repeated, "我們的門市位於市區的中心，交通十分便利。", repeated, repeated]),
    ));
    let stations = ["北", "中", "南", "東", "西", "宜", "花", "澎", "金", "竹"];
    let readings: Vec<String> = (0..30)
        .map(|i| format!("{} 2024-06-{:02}。", stations[i % stations.len()], i + 1))
        .collect();
    let mut newline_lines = vec!["臺灣各地的氣象觀測紀錄如下。"];
    newline_lines.extend(readings.iter().map(String::as_str));
    v.push(Page::html(
        "readings",
        "NewLineRatio",
        "觀測紀錄",
        &paragraphs(&newline_lines),
    ));

    v
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/fixtures/golden.warc.gz".into());
    let mut pages = pages();

    // The smallest id of the cluster survives.
    let mut cluster: Vec<(String, usize)> = pages
        .iter()
        .enumerate()
        .filter(|(_, p)| p.expect == "Cluster")
        .map(|(i, p)| (document_id(&p.record_id()), i))
        .collect();
    cluster.sort();
    for (rank, (_, i)) in cluster.iter().enumerate() {
        pages[*i].expect = if rank == 0 { "Kept".into() } else { "Duplicate".into() };
    }

    let mut w = WarcWriter::new(BufWriter::new(File::create(&out)?));
    w.write_record(
        "warcinfo",
        "<urn:uuid:golden-info>",
        "",
        DATE,
        "application/warc-fields",
        b"software: twcurate fixture\r\n",
    )?;
    for (i, p) in pages.iter().enumerate() {
        let uri = format!("https://{}/{}/{}", p.host, p.expect, p.slug);
        if i == 3 {
            w.write_record(
                "request",
                "<urn:uuid:golden-request>",
                &uri,
                DATE,
                "application/http; msgtype=request",
                b"GET / HTTP/1.1\r\n\r\n",
            )?;
        }
        w.write_response(&p.record_id(), &uri, DATE, &p.content_type, &p.body)?;
    }
    // A record whose header lacks Content-Length.
    w.write_member(b"WARC/1.0\r\nWARC-Type: response\r\nWARC-Record-ID: <urn:uuid:golden-corrupt>\r\n\r\nHTTP/1.1 200 OK\r\n\r\n<p>\xe5\x8f\xb0\xe7\x81\xa3</p>\r\n\r\n")?;
    w.finish()?;
    println!("wrote {} responses to {out}", pages.len());
    Ok(())
}
